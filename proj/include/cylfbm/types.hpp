#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace cylfbm {

enum class Regime { low, high };

// Hurst parameter H in (0,1) \ {1/2}. Values within 1e-9 of 1/2 are rejected
// as well: the kernel constants have a pole there.
class Hurst {
 public:
  explicit Hurst(double value) : value_(value) {
    if (!(value > 0.0) || !(value < 1.0))
      throw std::invalid_argument("Hurst parameter must lie in (0,1)");
    if (std::abs(value - 0.5) <= 1e-9)
      throw std::invalid_argument("Hurst parameter 1/2 is excluded");
  }

  double value() const { return value_; }
  Regime regime() const { return value_ < 0.5 ? Regime::low : Regime::high; }
  bool low() const { return value_ < 0.5; }
  bool high() const { return value_ > 0.5; }

 private:
  double value_;
};

// Uniform partition of [0,T] with n+1 nodes t_j = j*T/n.
class TimeGrid {
 public:
  TimeGrid(double horizon, int n) : horizon_(horizon), n_(n) {
    if (!(horizon > 0.0)) throw std::invalid_argument("grid horizon must be positive");
    if (n < 1) throw std::invalid_argument("grid must have at least one step");
  }

  double horizon() const { return horizon_; }
  int steps() const { return n_; }
  int nodes_count() const { return n_ + 1; }
  double step() const { return horizon_ / n_; }
  double node(int j) const { return horizon_ * j / n_; }

  std::vector<double> nodes() const {
    std::vector<double> t(n_ + 1);
    for (int j = 0; j <= n_; ++j) t[j] = node(j);
    return t;
  }

  // Index of a node equal to t, or -1 if t is not on the grid.
  int node_index(double t, double tol = 1e-9) const {
    const double x = t / step();
    const long j = std::lround(x);
    if (j < 0 || j > n_) return -1;
    if (std::abs(x - static_cast<double>(j)) > tol * std::max(1.0, x)) return -1;
    return static_cast<int>(j);
  }

  bool operator==(const TimeGrid& o) const { return horizon_ == o.horizon_ && n_ == o.n_; }

 private:
  double horizon_;
  int n_;
};

// Values of a function [0,T] -> R^m on a TimeGrid; row j = f(t_j).
struct SampledFunction {
  TimeGrid grid;
  Eigen::MatrixXd values; // (n+1) x m

  SampledFunction(TimeGrid g, Eigen::MatrixXd v) : grid(g), values(std::move(v)) {
    if (values.rows() != grid.nodes_count())
      throw std::invalid_argument("sampled values must have one row per grid node");
    if (values.cols() < 1) throw std::invalid_argument("dimension m must be >= 1");
    if (!values.allFinite()) throw std::invalid_argument("sampled values must be finite");
  }

  int dim() const { return static_cast<int>(values.cols()); }

  // Piecewise-linear evaluation, clamped to [0,T].
  double eval_scalar(double t, int col = 0) const {
    const int n = grid.steps();
    const double h = grid.step();
    if (t <= 0.0) return values(0, col);
    if (t >= grid.horizon()) return values(n, col);
    const int j = std::min(n - 1, static_cast<int>(t / h));
    const double w = (t - grid.node(j)) / h;
    return (1.0 - w) * values(j, col) + w * values(j + 1, col);
  }
};

SampledFunction sample_scalar(const TimeGrid& grid, const std::function<double(double)>& f);

// Step function sum_i x_i 1_{[t_i, t_{i+1})}, right-continuous pieces.
struct SimpleFunction {
  std::vector<double> breakpoints; // size n+1, 0 = t_0 < ... < t_n = T
  Eigen::MatrixXd pieces;          // n x m, row i = x_i

  SimpleFunction(std::vector<double> breaks, Eigen::MatrixXd x)
      : breakpoints(std::move(breaks)), pieces(std::move(x)) {
    if (breakpoints.size() < 2) throw std::invalid_argument("need at least one piece");
    if (breakpoints.front() != 0.0)
      throw std::invalid_argument("simple function must start at 0");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
      if (!(breakpoints[i] > breakpoints[i - 1]))
        throw std::invalid_argument("breakpoints must be strictly increasing");
    if (pieces.rows() + 1 != static_cast<Eigen::Index>(breakpoints.size()))
      throw std::invalid_argument("piece count must match breakpoints");
    if (pieces.cols() < 1) throw std::invalid_argument("dimension m must be >= 1");
  }

  int dim() const { return static_cast<int>(pieces.cols()); }
  double horizon() const { return breakpoints.back(); }

  // Value of coordinate `col` at time t (zero outside [0,T)).
  double eval_scalar(double t, int col = 0) const {
    if (t < 0.0 || t >= horizon()) return 0.0;
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
    const auto i = static_cast<Eigen::Index>(it - breakpoints.begin()) - 1;
    return pieces(i, col);
  }
};

} // namespace cylfbm
