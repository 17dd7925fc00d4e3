#pragma once

#include <cmath>
#include <stdexcept>

namespace cylfbm::special {

// Gamma function for positive arguments.
inline double gamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_fn: argument must be positive");
  return std::tgamma(x);
}

inline double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
  return std::lgamma(x);
}

// Beta(a,b) = Gamma(a)Gamma(b)/Gamma(a+b), positive arguments.
inline double beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("beta_fn: arguments must be positive");
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

} // namespace cylfbm::special
