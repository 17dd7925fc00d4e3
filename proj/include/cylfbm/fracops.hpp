#pragma once

// Fractional integral/derivative operators (right-sided on [0,T]), the K*
// transform in both Hurst regimes, the M / |M| inner products, Weyl-Marchaud
// derivatives, and restriction/reflection.
//
// Grid operators work on SampledFunction (piecewise-linear interpretation)
// and SimpleFunction (exact step interpretation). The pointwise machinery
// takes a ScalarIntegrand: a callable plus its interior jump locations, so
// quadratures never integrate across a discontinuity.

#include <functional>
#include <span>
#include <vector>

#include "cylfbm/types.hpp"

namespace cylfbm::fracops {

struct ScalarIntegrand {
  std::function<double(double)> f;
  std::vector<double> jumps; // sorted, strictly inside (0,T)
};

ScalarIntegrand from_sampled(const SampledFunction& f, int col = 0);
ScalarIntegrand from_simple(const SimpleFunction& f, int col = 0);

enum class Side { plus, minus };

// ---- grid operators -------------------------------------------------------

// (I^alpha_{T-} f)(t) = (1/Gamma(alpha)) \int_t^T (s-t)^{alpha-1} f(s) ds
SampledFunction frac_integral(const SampledFunction& f, double alpha);

// (D^alpha_{T-} f)(t) = (1/Gamma(1-alpha)) [ f(t)/(T-t)^alpha
//                        + alpha \int_t^T (f(t)-f(s))/(s-t)^{alpha+1} ds ];
// the value at t = T is extrapolated from the last two interior nodes.
SampledFunction frac_derivative(const SampledFunction& f, double alpha);

// K* via the fractional-operator rewrites. Nodes at singular endpoints are
// evaluated at a half-cell offset.
SampledFunction kstar(const SampledFunction& f, const Hurst& h, int quad_n = 2048);

// K* via the kernel-derivative forms; independent quadrature, cross-check oracle.
SampledFunction kstar_direct_form(const SampledFunction& f, const Hurst& h,
                                  int quad_n = 2048);

// G_f of the low-regime factorisation; satisfies ||G_f||_{L2} = ||f||_M.
SampledFunction g_f_form(const SampledFunction& f, const Hurst& h, int quad_n = 2048);

// Exact double sum over pieces (no quadrature).
double m_inner_simple(const SimpleFunction& f, const SimpleFunction& g, const Hurst& h);

// |M| norm, H > 1/2 only: H(2H-1) \int\int ||f(s)|| ||f(t)|| |s-t|^{2H-2}.
double abs_m_norm(const SampledFunction& f, const Hurst& h);

// <f,g>_M for H > 1/2: H(2H-1) \int\int [f(s),g(t)] |s-t|^{2H-2}.
double m_inner_high(const SampledFunction& f, const SampledFunction& g, const Hurst& h);

// Weyl-Marchaud derivative of f extended by zero outside [0,T].
SampledFunction weyl_marchaud(const SampledFunction& f, double alpha, Side side);

// 1_{[0,t]} f or 1_{[0,t]} f(t-.) on the original grid; t must be a node.
SampledFunction restrict_fn(const SampledFunction& f, double t, bool reflect);

// ---- pointwise machinery --------------------------------------------------

double frac_integral_at(const ScalarIntegrand& fi, double T, double alpha, double t,
                        int quad_n = 2048);
double frac_derivative_at(const ScalarIntegrand& fi, double T, double alpha, double t,
                          int quad_n = 2048);
double kstar_at(const ScalarIntegrand& fi, double T, const Hurst& h, double t,
                int quad_n = 2048);
double kstar_direct_at(const ScalarIntegrand& fi, double T, const Hurst& h, double t,
                       int quad_n = 2048);
double g_f_at(const ScalarIntegrand& fi, double T, const Hurst& h, double s,
              int quad_n = 2048);
double weyl_marchaud_at(const ScalarIntegrand& fi, double T, double alpha, Side side,
                        double r, int quad_n = 2048);
// Exact Weyl-Marchaud value for a step function (r not a breakpoint).
double weyl_marchaud_simple_at(const SimpleFunction& f, double alpha, Side side, double r,
                               int col = 0);

// ---- norms ----------------------------------------------------------------

// ||K* f||^2_{L2[0,T]} by segment-aware tanh-sinh; equals ||f||^2_M.
double kstar_l2_norm_sq(const ScalarIntegrand& fi, double T, const Hurst& h,
                        int outer_n = 512, int quad_n = 512);

// ||f||^2_M of a scalar integrand: high regime via the |s-t|^{2H-2} product
// integration (cells aligned with jumps), low regime via kstar_l2_norm_sq.
double m_norm_sq_scalar(const ScalarIntegrand& fi, double T, const Hurst& h,
                        int n = 2048);

// Columnwise sum of m_norm_sq_scalar over the coordinates of f.
double m_norm_sq(const SampledFunction& f, const Hurst& h, int n = 2048);

// ||D^{alpha}_{T-} f||_{L2} with alpha = 1/2 - H (norm of H^{1/2-H}_{T-}).
double h_alpha_norm(const SampledFunction& f, const Hurst& h);

// Grid L2 norm (trapezoid).
double l2_norm(const SampledFunction& f);

// sum_{i,j} phi_i psi_j \int\int_{cell_i x cell_j} |s-t|^{2H-2} ds dt for
// midpoint values on a uniform grid of cells with width h; the cell weights
// are exact (second differences of |x|^{2H}/(2H(2H-1))).
double weighted_pow_double_sum(std::span<const double> phi, std::span<const double> psi,
                               double h, double twoH);

} // namespace cylfbm::fracops
