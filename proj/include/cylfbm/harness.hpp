#pragma once

#include <span>
#include <string>

namespace cylfbm::harness {

struct McReport {
  double estimate = 0.0;
  double stderr_est = 0.0;
  double reference = 0.0;
  double z_score = 0.0;
  long n_samples = 0;
  bool pass = false;

  // "CHECK <name> estimate=<v> ref=<v> z=<v> verdict=<pass|fail>"
  std::string line(const std::string& name) const;
};

// z-test of the sample mean against `reference`.
McReport mc_compare(std::span<const double> samples, double reference,
                    double z_threshold = 4.0);

// z-test of the sample variance; chi-square-based standard error
// stderr(Var^) = Var^ * sqrt(2/(n-1)) for Gaussian samples.
McReport mc_compare_variance(std::span<const double> samples, double ref_var,
                             double z_threshold = 4.0);

// z-test of the empirical covariance of paired samples.
McReport mc_compare_cov(std::span<const double> x, std::span<const double> y,
                        double ref_cov, double z_threshold = 4.0);

// Least-squares slope of log(error) against log(h).
double convergence_rate(std::span<const double> errors, std::span<const double> h);

struct NormalityReport {
  double jb_stat = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  bool reject_at_1pct = false; // JB > 9.21 (chi^2_2, 1%)
};

NormalityReport jarque_bera(std::span<const double> samples);

} // namespace cylfbm::harness
