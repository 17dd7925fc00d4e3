#pragma once

#include <cstdint>

#include "cylfbm/fbm.hpp"
#include "cylfbm/types.hpp"

namespace cylfbm::wiener {

struct WienerIntegralResult {
  Eigen::MatrixXd samples;    // n_paths x m
  double exact_second_moment; // E || \int f db ||^2 = ||f||^2_M
  double stderr_mc;           // standard error of the mean squared norm
};

// Riemann-Stieltjes sum over the pieces of f; exact given the discrete paths.
// Breakpoints of f must lie on the path grid.
Eigen::MatrixXd integrate_simple(const SimpleFunction& f, const fbm::FbmPathSet& paths);

WienerIntegralResult integrate_simple_result(const SimpleFunction& f,
                                             const fbm::FbmPathSet& paths, const Hurst& h);

// Simulation route through K*: samples \int (K*f) dW against standard Brownian
// increments on a grid refined by `refine`. Distributionally matches the
// direct route for the same f.
WienerIntegralResult integrate_via_kstar(const SampledFunction& f, const Hurst& h,
                                         int n_draws, std::uint64_t seed, int refine = 8,
                                         int quad_n = 512);

// <f,f>_M through the exact double sum.
double second_moment_exact(const SimpleFunction& f, const Hurst& h);

} // namespace cylfbm::wiener
