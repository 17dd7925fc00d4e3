#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cylfbm/types.hpp"

namespace cylfbm::fbm {

// R(s,t) = ((s^2H + t^2H - |s-t|^2H)) / 2
double covariance(double s, double t, const Hurst& h);

// Regime-dependent normalisation constant of the Volterra kernel.
double b_h_constant(const Hurst& h);

// Volterra kernel kappa(t,u) for 0 < u < t, singularity-aware quadrature
// with quad_n cells (substitution r = u + v^2 at the inner endpoint).
double kernel_kappa(double t, double u, const Hurst& h, int quad_n = 2048);

// \int_0^{s /\ t} kappa(s,u) kappa(t,u) du; converges to covariance(s,t).
double reconstruct_covariance(double s, double t, const Hurst& h, int quad_n = 2048);

// Autocovariance of unit-lag increments on a grid with step `step`:
// gamma(k) = (|k+1|^2H + |k-1|^2H - 2|k|^2H) * step^2H / 2
double increment_autocov(int k, double step, const Hurst& h);

struct FbmPathSet {
  TimeGrid grid;
  Hurst hurst;
  std::uint64_t seed;
  // n_paths x (n+1); column j holds b(t_j) for every path (contiguous).
  Eigen::MatrixXd paths;

  int n_paths() const { return static_cast<int>(paths.rows()); }
};

// Exact-in-distribution sampling by circulant embedding with a Cholesky
// fallback; one RNG stream per path index, increments for paths
// [first_path, first_path + count) as a count x n matrix.
Eigen::MatrixXd sample_increments(const TimeGrid& grid, const Hurst& h,
                                  std::size_t first_path, std::size_t count,
                                  std::uint64_t seed);

FbmPathSet sample_paths(const TimeGrid& grid, const Hurst& h, int n_paths,
                        std::uint64_t seed);

std::vector<double> increments_to_path(std::span<const double> increments);
std::vector<double> path_to_increments(std::span<const double> path);

// CSV: header "t,path_0,...,path_{P-1}", one row per grid node.
void write_paths_csv(std::ostream& os, const FbmPathSet& ps);

} // namespace cylfbm::fbm
