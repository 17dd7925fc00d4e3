#pragma once

// Quadrature utilities for weakly singular integrands.
//
// tanh_sinh: double-exponential rule; handles integrable algebraic
// singularities at either endpoint. Integrands are evaluated through
// SingularAware, which also receives the distances to both endpoints so that
// power-law factors can be formed without cancellation.
//
// power_weight_integral: product integration of v^p * g(v) with the weight
// moments taken in closed form against a piecewise-linear interpolant of g;
// this keeps integrable endpoint singularities (p in (-1,0)) exact in the
// weight.

#include <functional>
#include <span>
#include <vector>

namespace cylfbm::quad {

// f(x, dist_a, dist_b): dist_a = x - a, dist_b = b - x, both positive.
using SingularAware = std::function<double(double, double, double)>;

double tanh_sinh(const SingularAware& f, double a, double b, int n);

inline double tanh_sinh(const std::function<double(double)>& f, double a, double b, int n) {
  return tanh_sinh([&](double x, double, double) { return f(x); }, a, b, n);
}

// Split [a,b] at the interior points of `cuts` and apply tanh_sinh per piece
// (n nodes in total, at least 32 per piece).
double tanh_sinh_segmented(const SingularAware& f, double a, double b,
                           std::span<const double> cuts, int n);

// Materialised tanh-sinh nodes/weights on (a,b); nodes that would round onto
// an endpoint are dropped.
void tanh_sinh_nodes(double a, double b, int n, std::vector<double>& x,
                     std::vector<double>& w);

// \int_0^L v^p g(v) dv, p > -1. Cells graded toward 0 as v_i = L (i/m)^grade.
double power_weight_integral(double p, double L, const std::function<double(double)>& g,
                             int m, double grade = 1.0);

// \int_a^b u^p g(u) du with 0 < a < b and any p (exact weight moments against
// a piecewise-linear g); cells geometric when the range spans many scales.
double power_weight_range(double p, double a, double b,
                          const std::function<double(double)>& g, int m,
                          bool geometric = false);

// Composite trapezoid of nodal values on a uniform grid with step h.
double trapezoid(std::span<const double> values, double h);

} // namespace cylfbm::quad
