#pragma once

// Stochastic integrals of deterministic operator-valued integrands against a
// cylindrical fBm: the Gamma_Psi factorisation of the covariance, the
// Hilbert-Schmidt integrability test and Monte Carlo sampling.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cylfbm/cyl_process.hpp"
#include "cylfbm/fracops.hpp"
#include "cylfbm/types.hpp"

namespace cylfbm::stochint {

struct OperatorIntegrand {
  int dim_u = 0, dim_v = 0;
  std::function<Eigen::MatrixXd(double)> eval; // Psi(t): dim_v x dim_u
  std::vector<double> jumps;
  // diagonal semigroup Psi(t) = diag(e^{-lambda_k t}); dim_u == dim_v
  bool diagonal = false;
  std::vector<double> lambda;

  Eigen::MatrixXd operator()(double t) const { return eval(t); }
};

OperatorIntegrand make_diagonal_semigroup(std::vector<double> lambda);
OperatorIntegrand make_dense(std::function<Eigen::MatrixXd(double)> psi, int dim_u,
                             int dim_v, std::vector<double> jumps = {});
OperatorIntegrand make_constant(const Eigen::MatrixXd& M);

// scalar coordinate functions t -> [e_k, i* Psi*(t) v*] = <Psi(t) i e_k, v*>
fracops::ScalarIntegrand component_integrand(const OperatorIntegrand& psi,
                                             const cyl::Embedding& emb,
                                             const Eigen::VectorXd& v_star, int k);

// Gamma*_Psi v* = K*(i* Psi*(.) v*), columnwise K* on the grid (column k =
// X-coordinate k).
SampledFunction gamma_adjoint(const OperatorIntegrand& psi, const cyl::Embedding& emb,
                              const Eigen::VectorXd& v_star, const Hurst& h,
                              const TimeGrid& grid, int quad_n = 512);

// Shared quadrature samples of Gamma* for a family of functionals; the Gram
// matrix of these samples is Q_Psi.
struct GammaQuad {
  std::vector<double> t, w;            // tanh-sinh nodes/weights over (0, upto)
  std::vector<Eigen::MatrixXd> values; // per functional: nodes x N
};

GammaQuad gamma_quad(const OperatorIntegrand& psi, const cyl::Embedding& emb,
                     const Hurst& h, double upto,
                     const std::vector<Eigen::VectorXd>& functionals, int outer_n = 384,
                     int quad_n = 384);

Eigen::MatrixXd covariance_from_quad(const GammaQuad& gq);

// Q_Psi = Gamma Gamma* restricted to [0, upto], on the canonical V basis.
Eigen::MatrixXd covariance_q_psi(const OperatorIntegrand& psi, const cyl::Embedding& emb,
                                 const Hurst& h, double upto, int outer_n = 384,
                                 int quad_n = 384);

// Hilbert-Schmidt test: terms ||Gamma* f_k||^2_{L2} over the canonical V
// basis, partial sums and tail verdict. Diagonal semigroups use the exact
// mode-variance route; `declared_exponent` decides by the p-series rule.
cyl::GenuineReport hs_test(const OperatorIntegrand& psi, const cyl::Embedding& emb,
                           const Hurst& h, double T, int n_terms,
                           std::optional<double> declared_exponent = std::nullopt,
                           double band = 0.1, int quad_n = 256);

// Per-path samples of (Z_Psi f_j)_{j < dim_v} = \int_0^{upto} Psi dB by
// step sums on a grid refined by `refine`.
Eigen::MatrixXd simulate(const OperatorIntegrand& psi, const cyl::Embedding& emb,
                         const Hurst& h, const TimeGrid& grid, double upto, int n_paths,
                         std::uint64_t seed, int refine = 8);

struct DominationReport {
  std::vector<double> ratios; // ||i*Phi*(.)v*||_M / ||i*Psi*(.)v*||_M per functional
  double max_ratio;
  bool partial_sums_dominated; // hs(Phi) <= c^2 hs(Psi) termwise
};

DominationReport domination_check(const OperatorIntegrand& phi,
                                  const OperatorIntegrand& psi, const cyl::Embedding& emb,
                                  const Hurst& h, double T,
                                  const std::vector<Eigen::VectorXd>& functionals,
                                  int quad_n = 256);

// ||1_{[t,t+dt]} i*Psi*(.)v*||^2_M for each dt in dts.
std::vector<double> mean_square_continuity(const OperatorIntegrand& psi,
                                           const cyl::Embedding& emb, const Hurst& h,
                                           double T, const Eigen::VectorXd& v_star,
                                           double t, const std::vector<double>& dts,
                                           int quad_n = 512);

} // namespace cylfbm::stochint
