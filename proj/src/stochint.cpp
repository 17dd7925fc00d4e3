#include "cylfbm/stochint.hpp"

#include <cmath>

#include "cylfbm/cauchy.hpp"
#include "cylfbm/fbm.hpp"
#include "cylfbm/kernels.hpp"
#include "cylfbm/quad.hpp"
#include "cylfbm/rng.hpp"

namespace cylfbm::stochint {

OperatorIntegrand make_diagonal_semigroup(std::vector<double> lambda) {
  OperatorIntegrand psi;
  const int n = static_cast<int>(lambda.size());
  if (n < 1) throw std::invalid_argument("make_diagonal_semigroup: need eigenvalues");
  psi.dim_u = psi.dim_v = n;
  psi.diagonal = true;
  psi.lambda = lambda;
  psi.eval = [lam = std::move(lambda), n](double t) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) M(k, k) = std::exp(-lam[k] * t);
    return M;
  };
  return psi;
}

OperatorIntegrand make_dense(std::function<Eigen::MatrixXd(double)> psi, int dim_u,
                             int dim_v, std::vector<double> jumps) {
  if (dim_u < 1 || dim_v < 1) throw std::invalid_argument("make_dense: bad dimensions");
  OperatorIntegrand p;
  p.dim_u = dim_u;
  p.dim_v = dim_v;
  p.eval = std::move(psi);
  p.jumps = std::move(jumps);
  return p;
}

OperatorIntegrand make_constant(const Eigen::MatrixXd& M) {
  return make_dense([M](double) { return M; }, static_cast<int>(M.cols()),
                    static_cast<int>(M.rows()));
}

fracops::ScalarIntegrand component_integrand(const OperatorIntegrand& psi,
                                             const cyl::Embedding& emb,
                                             const Eigen::VectorXd& v_star, int k) {
  if (v_star.size() != psi.dim_v)
    throw std::invalid_argument("component_integrand: functional dimension mismatch");
  if (emb.dim_u() != psi.dim_u)
    throw std::invalid_argument("component_integrand: embedding dimension mismatch");
  if (psi.diagonal) {
    // <Psi(t) i e_k, v*> = q-coeff * e^{-lambda_k t} * v*_k (diagonal embedding)
    if (emb.kind == cyl::EmbeddingKind::diagonal) {
      const double c = emb.coeff(k, k) * v_star(k);
      const double lam = psi.lambda[k];
      return {[c, lam](double t) { return c * std::exp(-lam * t); }, psi.jumps};
    }
  }
  const Eigen::VectorXd ek = emb.coeff.col(k);
  auto eval = psi.eval;
  return {[eval, ek, v_star](double t) { return (eval(t) * ek).dot(v_star); }, psi.jumps};
}

namespace {

std::vector<Eigen::VectorXd> canonical_basis(int dim) {
  std::vector<Eigen::VectorXd> fs(dim);
  for (int j = 0; j < dim; ++j) {
    fs[j] = Eigen::VectorXd::Zero(dim);
    fs[j](j) = 1.0;
  }
  return fs;
}

} // namespace

SampledFunction gamma_adjoint(const OperatorIntegrand& psi, const cyl::Embedding& emb,
                              const Eigen::VectorXd& v_star, const Hurst& h,
                              const TimeGrid& grid, int quad_n) {
  const int N = emb.truncation;
  const int n = grid.steps();
  const double T = grid.horizon();
  Eigen::MatrixXd out(n + 1, N);
  for (int k = 0; k < N; ++k) {
    const auto fi = component_integrand(psi, emb, v_star, k);
    for (int j = 0; j <= n; ++j) {
      if (j == n && h.high()) {
        out(j, k) = 0.0;
        continue;
      }
      double t = grid.node(j);
      if (j == 0) t = 0.5 * grid.step();
      if (j == n && h.low()) t = T - 0.5 * grid.step();
      out(j, k) = fracops::kstar_at(fi, T, h, t, quad_n);
    }
  }
  return {grid, std::move(out)};
}

GammaQuad gamma_quad(const OperatorIntegrand& psi, const cyl::Embedding& emb,
                     const Hurst& h, double upto,
                     const std::vector<Eigen::VectorXd>& functionals, int outer_n,
                     int quad_n) {
  if (!(upto > 0.0)) throw std::domain_error("gamma_quad: upto must be positive");
  GammaQuad gq;

  // shared tanh-sinh nodes over (0, upto), segmented at psi's jumps
  std::vector<double> edges{0.0};
  for (double j : psi.jumps)
    if (j > 0.0 && j < upto) edges.push_back(j);
  edges.push_back(upto);
  const int pieces = static_cast<int>(edges.size()) - 1;
  const int per = std::max(32, outer_n / pieces);
  constexpr double umax = 3.9;
  for (int s = 0; s < pieces; ++s) {
    const double a = edges[s], b = edges[s + 1];
    const double half = 0.5 * (b - a);
    const double du = 2.0 * umax / per;
    for (int j = 0; j < per; ++j) {
      const double u = -umax + (j + 0.5) * du;
      const double w = 0.5 * M_PI * std::sinh(u);
      const double e = std::exp(-2.0 * std::abs(w));
      const double near = 2.0 * e / (1.0 + e);
      const double x = u < 0.0 ? a + half * near : b - half * near;
      if (!(x > a) || !(x < b)) continue;
      const double ch = std::cosh(w);
      gq.t.push_back(x);
      gq.w.push_back(half * (0.5 * M_PI) * std::cosh(u) / (ch * ch) * du);
    }
  }

  const int N = emb.truncation;
  const int S = static_cast<int>(gq.t.size());
  for (const auto& f : functionals) {
    Eigen::MatrixXd vals(S, N);
    for (int k = 0; k < N; ++k) {
      const auto fi = component_integrand(psi, emb, f, k);
      for (int s = 0; s < S; ++s)
        vals(s, k) = fracops::kstar_at(fi, upto, h, gq.t[s], quad_n);
    }
    gq.values.push_back(std::move(vals));
  }
  return gq;
}

Eigen::MatrixXd covariance_from_quad(const GammaQuad& gq) {
  const int m = static_cast<int>(gq.values.size());
  Eigen::MatrixXd Q(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < gq.t.size(); ++i)
        s += gq.w[i] * gq.values[a].row(i).dot(gq.values[b].row(i));
      Q(a, b) = Q(b, a) = s;
    }
  }
  return Q;
}

Eigen::MatrixXd covariance_q_psi(const OperatorIntegrand& psi, const cyl::Embedding& emb,
                                 const Hurst& h, double upto, int outer_n, int quad_n) {
  return covariance_from_quad(
      gamma_quad(psi, emb, h, upto, canonical_basis(psi.dim_v), outer_n, quad_n));
}

cyl::GenuineReport hs_test(const OperatorIntegrand& psi, const cyl::Embedding& emb,
                           const Hurst& h, double T, int n_terms,
                           std::optional<double> declared_exponent, double band,
                           int quad_n) {
  if (n_terms < 1 || n_terms > psi.dim_v)
    throw std::invalid_argument("hs_test: n_terms out of range");
  std::vector<double> terms(n_terms);

  if (psi.diagonal && emb.kind == cyl::EmbeddingKind::diagonal) {
    // ||Gamma* f_k||^2 = ||q_k e^{-lambda_k .}||^2_{M[0,T]}; by reflection this
    // is the exact mode variance at horizon T
    for (int k = 0; k < n_terms; ++k)
      terms[k] =
          cauchy::mode_variance_exact(psi.lambda[k], emb.coeff(k, k), T, h, 4 * quad_n);
    return cyl::tail_verdict(terms, declared_exponent, band);
  }

  const auto basis = canonical_basis(psi.dim_v);
  for (int k = 0; k < n_terms; ++k) {
    double s = 0.0;
    for (int c = 0; c < emb.truncation; ++c) {
      const auto fi = component_integrand(psi, emb, basis[k], c);
      s += fracops::m_norm_sq_scalar(fi, T, h, 4 * quad_n);
    }
    terms[k] = s;
  }
  return cyl::tail_verdict(terms, declared_exponent, band);
}

Eigen::MatrixXd simulate(const OperatorIntegrand& psi, const cyl::Embedding& emb,
                         const Hurst& h, const TimeGrid& grid, double upto, int n_paths,
                         std::uint64_t seed, int refine) {
  if (emb.dim_u() != psi.dim_u)
    throw std::invalid_argument("simulate: embedding dimension mismatch");
  if (grid.node_index(upto) < 0)
    throw std::domain_error("simulate: upto must be a grid node");
  const int n_ref = grid.steps() * refine;
  const TimeGrid rgrid(grid.horizon(), n_ref);
  const double hr = rgrid.step();
  const int n_up = static_cast<int>(std::lround(upto / hr));

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_paths, psi.dim_v);
  for (int k = 0; k < emb.truncation; ++k) {
    // step weights <Psi(s_mid) i e_k, f_j> for all canonical f_j at once
    Eigen::MatrixXd W(n_up, psi.dim_v);
    const Eigen::VectorXd ek = emb.coeff.col(k);
    for (int c = 0; c < n_up; ++c) {
      const double s = (c + 0.5) * hr;
      W.row(c) = (psi.eval(s) * ek).transpose();
    }
    const std::uint64_t cseed = rng::component_seed(seed, k);
    constexpr int chunk = 16384;
    for (int lo = 0; lo < n_paths; lo += chunk) {
      const int cnt = std::min(chunk, n_paths - lo);
      Eigen::MatrixXd inc = fbm::sample_increments(rgrid, h, lo, cnt, cseed);
      out.middleRows(lo, cnt).noalias() += inc.leftCols(n_up) * W;
    }
  }
  return out;
}

DominationReport domination_check(const OperatorIntegrand& phi,
                                  const OperatorIntegrand& psi, const cyl::Embedding& emb,
                                  const Hurst& h, double T,
                                  const std::vector<Eigen::VectorXd>& functionals,
                                  int quad_n) {
  DominationReport rep;
  rep.max_ratio = 0.0;
  for (const auto& f : functionals) {
    double np = 0.0, nq = 0.0;
    for (int k = 0; k < emb.truncation; ++k) {
      np += fracops::m_norm_sq_scalar(component_integrand(phi, emb, f, k), T, h,
                                      4 * quad_n);
      nq += fracops::m_norm_sq_scalar(component_integrand(psi, emb, f, k), T, h,
                                      4 * quad_n);
    }
    const double ratio = nq > 0.0 ? std::sqrt(np / nq)
                                  : (np > 0.0 ? std::numeric_limits<double>::infinity()
                                              : 0.0);
    rep.ratios.push_back(ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }

  const int terms = std::min(psi.dim_v, phi.dim_v);
  const auto hp = hs_test(phi, emb, h, T, terms, std::nullopt, 0.1, quad_n);
  const auto hq = hs_test(psi, emb, h, T, terms, std::nullopt, 0.1, quad_n);
  const double c2 = rep.max_ratio * rep.max_ratio;
  rep.partial_sums_dominated = true;
  for (int k = 0; k < terms; ++k)
    if (hp.partial_sums[k] > c2 * hq.partial_sums[k] * (1.0 + 1e-6) + 1e-14)
      rep.partial_sums_dominated = false;
  return rep;
}

std::vector<double> mean_square_continuity(const OperatorIntegrand& psi,
                                           const cyl::Embedding& emb, const Hurst& h,
                                           double T, const Eigen::VectorXd& v_star,
                                           double t, const std::vector<double>& dts,
                                           int quad_n) {
  std::vector<double> out;
  for (double dt : dts) {
    if (dt < 0.0 || t + dt > T + 1e-12)
      throw std::domain_error("mean_square_continuity: window outside [0,T]");
    if (dt == 0.0) {
      out.push_back(0.0);
      continue;
    }
    double s = 0.0;
    for (int k = 0; k < emb.truncation; ++k) {
      auto base = component_integrand(psi, emb, v_star, k);
      auto fn = base.f;
      fracops::ScalarIntegrand cut{
          [fn, t, dt](double x) { return (x >= t && x < t + dt) ? fn(x) : 0.0; },
          {t, t + dt}};
      for (double j : base.jumps)
        if (j > t && j < t + dt) cut.jumps.push_back(j);
      std::sort(cut.jumps.begin(), cut.jumps.end());
      s += fracops::m_norm_sq_scalar(cut, T, h, quad_n);
    }
    out.push_back(s);
  }
  return out;
}

} // namespace cylfbm::stochint
