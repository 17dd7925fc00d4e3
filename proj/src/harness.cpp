#include "cylfbm/harness.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "cylfbm/kernels.hpp"

namespace cylfbm::harness {

std::string McReport::line(const std::string& name) const {
  char buf[192];
  std::snprintf(buf, sizeof(buf), "CHECK %s estimate=%.10g ref=%.10g z=%.4g verdict=%s",
                name.c_str(), estimate, reference, z_score, pass ? "pass" : "fail");
  return buf;
}

namespace {

struct Moments {
  double mean, var;
  long n;
};

Moments mean_var(std::span<const double> s) {
  if (s.size() < 2) throw std::domain_error("need at least 2 samples");
  const long n = static_cast<long>(s.size());
  const double mean = kernels::sum(s) / n;
  double ss = 0.0;
  for (double x : s) ss += (x - mean) * (x - mean);
  return {mean, ss / (n - 1), n};
}

double z_of(double est, double ref, double se) {
  if (se > 0.0) return (est - ref) / se;
  return est == ref ? 0.0 : std::copysign(1e300, est - ref);
}

McReport make(double est, double se, double ref, long n, double z_threshold) {
  McReport r;
  r.estimate = est;
  r.stderr_est = se;
  r.reference = ref;
  r.n_samples = n;
  r.z_score = z_of(est, ref, se);
  r.pass = std::abs(r.z_score) <= z_threshold;
  return r;
}

} // namespace

McReport mc_compare(std::span<const double> samples, double reference, double z_threshold) {
  const auto m = mean_var(samples);
  return make(m.mean, std::sqrt(m.var / m.n), reference, m.n, z_threshold);
}

McReport mc_compare_variance(std::span<const double> samples, double ref_var,
                             double z_threshold) {
  const auto m = mean_var(samples);
  const double se = m.var * std::sqrt(2.0 / (m.n - 1));
  return make(m.var, se, ref_var, m.n, z_threshold);
}

McReport mc_compare_cov(std::span<const double> x, std::span<const double> y,
                        double ref_cov, double z_threshold) {
  if (x.size() != y.size()) throw std::invalid_argument("paired samples must match");
  const auto mx = mean_var(x);
  const auto my = mean_var(y);
  double sc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sc += (x[i] - mx.mean) * (y[i] - my.mean);
  const double cov = sc / (mx.n - 1);
  // Gaussian pairs: Var(cov^) = (Var_x Var_y + cov^2) / (n-1)
  const double se = std::sqrt((mx.var * my.var + cov * cov) / (mx.n - 1));
  return make(cov, se, ref_cov, mx.n, z_threshold);
}

double convergence_rate(std::span<const double> errors, std::span<const double> h) {
  if (errors.size() != h.size() || errors.size() < 3)
    throw std::domain_error("convergence_rate: need >= 3 matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const long n = static_cast<long>(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0) || !(h[i] > 0.0))
      throw std::domain_error("convergence_rate: errors and steps must be positive");
    const double x = std::log(h[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

NormalityReport jarque_bera(std::span<const double> samples) {
  const auto m = mean_var(samples);
  double s3 = 0.0, s4 = 0.0;
  for (double x : samples) {
    const double d = x - m.mean;
    s3 += d * d * d;
    s4 += d * d * d * d;
  }
  const double n = static_cast<double>(m.n);
  const double sd = std::sqrt(m.var * (n - 1) / n); // population sd for JB
  NormalityReport r;
  r.skewness = (s3 / n) / (sd * sd * sd);
  r.excess_kurtosis = (s4 / n) / (sd * sd * sd * sd) - 3.0;
  r.jb_stat = n * (r.skewness * r.skewness / 6.0 +
                   r.excess_kurtosis * r.excess_kurtosis / 24.0);
  r.reject_at_1pct = r.jb_stat > 9.21034;
  return r;
}

} // namespace cylfbm::harness
