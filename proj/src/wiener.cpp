#include "cylfbm/wiener.hpp"

#include <cmath>
#include <random>

#include "cylfbm/fracops.hpp"
#include "cylfbm/kernels.hpp"
#include "cylfbm/parallel.hpp"
#include "cylfbm/rng.hpp"

namespace cylfbm::wiener {

Eigen::MatrixXd integrate_simple(const SimpleFunction& f, const fbm::FbmPathSet& paths) {
  const int n_paths = paths.n_paths();
  const int m = f.dim();
  std::vector<int> idx(f.breakpoints.size());
  for (std::size_t i = 0; i < f.breakpoints.size(); ++i) {
    idx[i] = paths.grid.node_index(f.breakpoints[i]);
    if (idx[i] < 0)
      throw std::domain_error("integrate_simple: breakpoint off the path grid");
  }

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_paths, m);
  for (Eigen::Index i = 0; i < f.pieces.rows(); ++i) {
    const double* hi = paths.paths.col(idx[i + 1]).data();
    const double* lo = paths.paths.col(idx[i]).data();
    for (int c = 0; c < m; ++c) {
      const double x = f.pieces(i, c);
      if (x == 0.0) continue;
      kernels::add_scaled_diff(x, hi, lo, out.col(c).data(), n_paths);
    }
  }
  return out;
}

namespace {

// mean and standard error of ||X||^2 over sample rows
std::pair<double, double> squared_norm_stats(const Eigen::MatrixXd& samples) {
  const Eigen::Index n = samples.rows();
  Eigen::VectorXd sq(n);
  for (Eigen::Index i = 0; i < n; ++i) sq(i) = samples.row(i).squaredNorm();
  const double mean = sq.mean();
  if (n < 2) return {mean, 0.0};
  const double var = (sq.array() - mean).square().sum() / (n - 1);
  return {mean, std::sqrt(var / n)};
}

} // namespace

WienerIntegralResult integrate_simple_result(const SimpleFunction& f,
                                             const fbm::FbmPathSet& paths, const Hurst& h) {
  WienerIntegralResult r;
  r.samples = integrate_simple(f, paths);
  r.exact_second_moment = second_moment_exact(f, h);
  r.stderr_mc = squared_norm_stats(r.samples).second;
  return r;
}

WienerIntegralResult integrate_via_kstar(const SampledFunction& f, const Hurst& h,
                                         int n_draws, std::uint64_t seed, int refine,
                                         int quad_n) {
  if (n_draws < 1) throw std::invalid_argument("integrate_via_kstar: need draws");
  const double T = f.grid.horizon();
  const int n_ref = f.grid.steps() * refine;
  const double h_ref = T / n_ref;
  const int m = f.dim();

  // K*f at midpoints of the refined grid
  Eigen::MatrixXd phi(n_ref, m);
  for (int c = 0; c < m; ++c) {
    const auto fi = fracops::from_sampled(f, c);
    for (int j = 0; j < n_ref; ++j)
      phi(j, c) = fracops::kstar_at(fi, T, h, (j + 0.5) * h_ref, quad_n);
  }

  WienerIntegralResult r;
  r.samples = Eigen::MatrixXd::Zero(n_draws, m);
  const double sd = std::sqrt(h_ref);
  parallel::for_chunks(n_draws, [&](std::size_t lo, std::size_t hi, std::size_t) {
    std::normal_distribution<double> gauss;
    for (std::size_t p = lo; p < hi; ++p) {
      auto eng = rng::stream(seed, p);
      Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(m);
      for (int j = 0; j < n_ref; ++j) acc += (sd * gauss(eng)) * phi.row(j);
      r.samples.row(p) = acc;
    }
  });

  double exact = 0.0;
  for (int c = 0; c < m; ++c)
    exact += fracops::kstar_l2_norm_sq(fracops::from_sampled(f, c), T, h, 512, quad_n);
  r.exact_second_moment = exact;
  r.stderr_mc = squared_norm_stats(r.samples).second;
  return r;
}

double second_moment_exact(const SimpleFunction& f, const Hurst& h) {
  return fracops::m_inner_simple(f, f, h);
}

} // namespace cylfbm::wiener
