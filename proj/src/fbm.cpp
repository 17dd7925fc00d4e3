#include "cylfbm/fbm.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>

#include "cylfbm/parallel.hpp"
#include "cylfbm/quad.hpp"
#include "cylfbm/rng.hpp"
#include "cylfbm/special.hpp"

namespace cylfbm::fbm {

double covariance(double s, double t, const Hurst& h) {
  if (s < 0.0 || t < 0.0) throw std::domain_error("covariance: times must be nonnegative");
  const double twoH = 2.0 * h.value();
  return 0.5 * (std::pow(s, twoH) + std::pow(t, twoH) - std::pow(std::abs(s - t), twoH));
}

double b_h_constant(const Hurst& h) {
  const double H = h.value();
  if (h.high())
    return std::sqrt(H * (2.0 * H - 1.0)) /
           std::sqrt(special::beta_fn(2.0 - 2.0 * H, H - 0.5));
  return std::sqrt(2.0 * H / ((1.0 - 2.0 * H) * special::beta_fn(1.0 - 2.0 * H, H + 0.5)));
}

double kernel_kappa(double t, double u, const Hurst& h, int quad_n) {
  if (!(u > 0.0) || !(u < t))
    throw std::domain_error("kernel_kappa: need 0 < u < t");
  const double H = h.value();
  const double L = std::sqrt(t - u);
  const double bh = b_h_constant(h);

  if (h.high()) {
    // integral of (r-u)^(H-3/2) r^(H-1/2); r = u + v^2 gives weight v^(2H-2)
    const double integral = 2.0 * quad::power_weight_integral(
                                      2.0 * H - 2.0, L,
                                      [&](double v) { return std::pow(u + v * v, H - 0.5); },
                                      quad_n, 2.0);
    return bh * std::pow(u, 0.5 - H) * integral;
  }
  // (t/u)^(H-1/2) (t-u)^(H-1/2) minus the correction integral
  // \int_u^t (r-u)^(H-1/2) r^(H-3/2) dr. The integrand spans the scales u and
  // t; split at 2u into a scale-free part (r = u(1+x)) and a far part with the
  // r^(2H-2) weight exact on geometric cells.
  const double lead = std::pow(t / u, H - 0.5) * std::pow(t - u, H - 0.5);
  const double mid = std::min(2.0 * u, t);
  double integral = std::pow(u, 2.0 * H - 1.0) *
                    quad::power_weight_integral(
                        H - 0.5, mid / u - 1.0,
                        [&](double x) { return std::pow(1.0 + x, H - 1.5); },
                        quad_n / 2, 1.0);
  if (t > mid)
    integral += quad::power_weight_range(
        2.0 * H - 2.0, mid, t, [&](double r) { return std::pow(1.0 - u / r, H - 0.5); },
        quad_n / 2, true);
  return bh * (lead - (H - 0.5) * std::pow(u, 0.5 - H) * integral);
}

double reconstruct_covariance(double s, double t, const Hurst& h, int quad_n) {
  if (!(s > 0.0) || !(t > 0.0))
    throw std::domain_error("reconstruct_covariance: times must be positive");
  const double m = std::min(s, t);
  const int outer = 512;
  return quad::tanh_sinh(
      [&](double u, double, double) {
        return kernel_kappa(s, u, h, quad_n) * kernel_kappa(t, u, h, quad_n);
      },
      0.0, m, outer);
}

double increment_autocov(int k, double step, const Hurst& h) {
  const double twoH = 2.0 * h.value();
  const double a = std::pow(std::abs(k + 1.0), twoH) + std::pow(std::abs(k - 1.0), twoH) -
                   2.0 * std::pow(std::abs(static_cast<double>(k)), twoH);
  return 0.5 * a * std::pow(step, twoH);
}

namespace {

// Eigenvalues of the 2n-circulant embedding of the increment covariance.
// Empty result signals a failed embedding (negative spectrum).
std::vector<double> circulant_spectrum(const TimeGrid& grid, const Hurst& h) {
  const int n = grid.steps();
  const int N = 2 * n;
  std::vector<std::complex<double>> c(N), lam(N);
  for (int j = 0; j < N; ++j) {
    const int k = std::min(j, N - j);
    c[j] = increment_autocov(k, grid.step(), h);
  }
  Eigen::FFT<double> fft;
  fft.fwd(lam, c);

  std::vector<double> out(N);
  double maxv = 0.0, minv = 0.0;
  for (int j = 0; j < N; ++j) {
    out[j] = lam[j].real();
    maxv = std::max(maxv, out[j]);
    minv = std::min(minv, out[j]);
  }
  if (minv < -1e-10 * std::max(1.0, maxv)) return {};
  for (double& v : out) v = std::max(v, 0.0);
  return out;
}

struct CholFallback {
  Eigen::MatrixXd L;
};

CholFallback cholesky_factor(const TimeGrid& grid, const Hurst& h) {
  const int n = grid.steps();
  Eigen::MatrixXd cov(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cov(i, j) = increment_autocov(std::abs(i - j), grid.step(), h);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
    std::ostringstream msg;
    msg << "fbm sampling failed: circulant embedding and Cholesky both rejected the "
           "increment covariance (minimum eigenvalue "
        << es.eigenvalues().minCoeff() << ")";
    throw std::runtime_error(msg.str());
  }
  return {llt.matrixL()};
}

} // namespace

Eigen::MatrixXd sample_increments(const TimeGrid& grid, const Hurst& h,
                                  std::size_t first_path, std::size_t count,
                                  std::uint64_t seed) {
  const int n = grid.steps();
  const auto lam = circulant_spectrum(grid, h);

  Eigen::MatrixXd inc(count, n);
  if (!lam.empty()) {
    const int N = 2 * n;
    std::vector<double> amp(N);
    for (int k = 0; k < N; ++k) amp[k] = std::sqrt(lam[k] / N);

    parallel::for_chunks(count, [&](std::size_t lo, std::size_t hi, std::size_t) {
      Eigen::FFT<double> fft;
      std::vector<std::complex<double>> in(N), out(N);
      std::normal_distribution<double> gauss;
      for (std::size_t p = lo; p < hi; ++p) {
        auto eng = rng::stream(seed, first_path + p);
        for (int k = 0; k < N; ++k) {
          const double u = gauss(eng);
          const double v = gauss(eng);
          in[k] = std::complex<double>(amp[k] * u, amp[k] * v);
        }
        fft.fwd(out, in);
        for (int j = 0; j < n; ++j) inc(p, j) = out[j].real();
      }
    });
    return inc;
  }

  const auto chol = cholesky_factor(grid, h);
  parallel::for_chunks(count, [&](std::size_t lo, std::size_t hi, std::size_t) {
    std::normal_distribution<double> gauss;
    Eigen::VectorXd xi(n);
    for (std::size_t p = lo; p < hi; ++p) {
      auto eng = rng::stream(seed, first_path + p);
      for (int j = 0; j < n; ++j) xi(j) = gauss(eng);
      inc.row(p) = (chol.L * xi).transpose();
    }
  });
  return inc;
}

FbmPathSet sample_paths(const TimeGrid& grid, const Hurst& h, int n_paths,
                        std::uint64_t seed) {
  if (n_paths < 1) throw std::invalid_argument("sample_paths: need at least one path");
  const int n = grid.steps();
  Eigen::MatrixXd inc = sample_increments(grid, h, 0, static_cast<std::size_t>(n_paths), seed);

  FbmPathSet ps{grid, h, seed, Eigen::MatrixXd::Zero(n_paths, n + 1)};
  for (int j = 0; j < n; ++j) ps.paths.col(j + 1) = ps.paths.col(j) + inc.col(j);
  return ps;
}

std::vector<double> increments_to_path(std::span<const double> increments) {
  std::vector<double> path(increments.size() + 1, 0.0);
  for (std::size_t i = 0; i < increments.size(); ++i) path[i + 1] = path[i] + increments[i];
  return path;
}

std::vector<double> path_to_increments(std::span<const double> path) {
  if (path.empty()) return {};
  std::vector<double> inc(path.size() - 1);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) inc[i] = path[i + 1] - path[i];
  return inc;
}

void write_paths_csv(std::ostream& os, const FbmPathSet& ps) {
  os << "t";
  for (int p = 0; p < ps.n_paths(); ++p) os << ",path_" << p;
  os << "\n";
  char buf[40];
  for (int j = 0; j < ps.grid.nodes_count(); ++j) {
    std::snprintf(buf, sizeof(buf), "%.17g", ps.grid.node(j));
    os << buf;
    for (int p = 0; p < ps.n_paths(); ++p) {
      std::snprintf(buf, sizeof(buf), "%.17g", ps.paths(p, j));
      os << ',' << buf;
    }
    os << "\n";
  }
}

} // namespace cylfbm::fbm
