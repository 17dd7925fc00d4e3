#pragma once

// Cylindrical fBm via the truncated series representation
//   B(t)u* = sum_{k<=N} <i e_k, u*> b_k(t)
// with embeddings i from the diagonal, weighted-basis and anisotropic-sheet
// constructions, and the Hilbert-Schmidt (genuine-process) test.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cylfbm/types.hpp"

namespace cylfbm::cyl {

enum class EmbeddingKind { diagonal, weighted_basis, sheet };

// Finite model of i : X -> U. U is discretised in orthonormal coordinates:
// the diagonal embedding uses abstract basis coordinates; the L^2(0,1)
// constructions use pointwise values scaled by sqrt(1/m) on an m-point
// midpoint grid, so that Euclidean pairing equals the L^2 pairing.
struct Embedding {
  EmbeddingKind kind;
  int truncation; // N
  Eigen::MatrixXd coeff; // dim_u x N, column k = coordinates of i e_k
  std::optional<double> declared_exponent; // ||i e_k||^2 ~ C k^{-p} when known

  int dim_u() const { return static_cast<int>(coeff.rows()); }
  double norm_sq(int k) const { return coeff.col(k).squaredNorm(); }
};

// i e_k = q_k e_k on basis coordinates (dim_u = N).
Embedding make_diagonal(const std::vector<double>& q,
                        std::optional<double> declared_exponent = std::nullopt);

// i f = sum <e_k,f> tau_k(.) e_k(.) on L^2(0,1), e_k = sqrt(2) sin(k pi x),
// discretised on an m-point midpoint grid. Requires N < m.
Embedding make_weighted_basis(int m_grid, int N,
                              const std::function<double(int, double)>& tau,
                              std::optional<double> declared_exponent = std::nullopt);

// tau_k = q_k 1_{A_k} with A_k = [a_k, b_k) in (0,1): anisotropic sheet.
Embedding make_sheet(int m_grid, const std::vector<double>& q,
                     const std::vector<std::pair<double, double>>& cells,
                     std::optional<double> declared_exponent = std::nullopt);

// Q = i i* as a Gram matrix on the embedding coordinates.
Eigen::MatrixXd covariance_operator(const Embedding& e);

struct CylFbm {
  Embedding embedding;
  Hurst hurst;
  TimeGrid grid;
  int n_paths;
  std::uint64_t seed;
};

// Per-path samples of B(t)u* for a batch of queries; a single pass over the
// component fBms b_k (disjoint deterministic streams per (path, component)).
Eigen::MatrixXd apply_many(const CylFbm& B,
                           const std::vector<std::pair<double, Eigen::VectorXd>>& queries);

inline Eigen::VectorXd apply(const CylFbm& B, double t, const Eigen::VectorXd& u_star) {
  return apply_many(B, {{t, u_star}}).col(0);
}

enum class Verdict { genuine, cylindrical_only, inconclusive };

std::string to_string(Verdict v);

struct GenuineReport {
  Verdict verdict;
  std::vector<double> partial_sums; // of ||i e_k||^2, k <= N
  double exponent;                  // declared or fitted tail exponent p
  bool exponent_declared;
};

// Hilbert-Schmidt test: partial sums of ||i e_k||^2 plus a tail verdict.
// A declared exponent decides by the exact p-series rule; a fitted exponent
// uses the inconclusive band around p = 1.
GenuineReport is_genuine(const Embedding& e, int N, double band = 0.1);

// Shared tail-verdict rule (also used by stochint/cauchy summability tests).
GenuineReport tail_verdict(const std::vector<double>& terms,
                           std::optional<double> declared_exponent, double band = 0.1);

} // namespace cylfbm::cyl
