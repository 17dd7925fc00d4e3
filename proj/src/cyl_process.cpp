#include "cylfbm/cyl_process.hpp"

#include <cmath>

#include "cylfbm/fbm.hpp"
#include "cylfbm/kernels.hpp"
#include "cylfbm/rng.hpp"

namespace cylfbm::cyl {

Embedding make_diagonal(const std::vector<double>& q, std::optional<double> declared) {
  const int N = static_cast<int>(q.size());
  if (N < 1) throw std::invalid_argument("make_diagonal: need at least one weight");
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(N, N);
  for (int k = 0; k < N; ++k) c(k, k) = q[k];
  return {EmbeddingKind::diagonal, N, std::move(c), declared};
}

namespace {

// sqrt(2) sin(k pi x) at midpoint x_i, in sqrt(1/m)-scaled coordinates
Eigen::VectorXd sine_basis(int m_grid, int k) {
  Eigen::VectorXd e(m_grid);
  const double scale = std::sqrt(2.0 / m_grid);
  for (int i = 0; i < m_grid; ++i) {
    const double x = (i + 0.5) / m_grid;
    e(i) = scale * std::sin(k * M_PI * x);
  }
  return e;
}

} // namespace

Embedding make_weighted_basis(int m_grid, int N,
                              const std::function<double(int, double)>& tau,
                              std::optional<double> declared) {
  if (N < 1 || m_grid <= N)
    throw std::invalid_argument("make_weighted_basis: need 1 <= N < m_grid");
  Eigen::MatrixXd c(m_grid, N);
  for (int k = 0; k < N; ++k) {
    Eigen::VectorXd e = sine_basis(m_grid, k + 1);
    for (int i = 0; i < m_grid; ++i) {
      const double x = (i + 0.5) / m_grid;
      c(i, k) = tau(k + 1, x) * e(i);
    }
  }
  return {EmbeddingKind::weighted_basis, N, std::move(c), declared};
}

Embedding make_sheet(int m_grid, const std::vector<double>& q,
                     const std::vector<std::pair<double, double>>& cells,
                     std::optional<double> declared) {
  const int N = static_cast<int>(q.size());
  if (N < 1 || cells.size() != q.size())
    throw std::invalid_argument("make_sheet: weights and cells must match");
  if (m_grid <= N) throw std::invalid_argument("make_sheet: need N < m_grid");
  Eigen::MatrixXd c(m_grid, N);
  for (int k = 0; k < N; ++k) {
    Eigen::VectorXd e = sine_basis(m_grid, k + 1);
    for (int i = 0; i < m_grid; ++i) {
      const double x = (i + 0.5) / m_grid;
      const bool inside = x >= cells[k].first && x < cells[k].second;
      c(i, k) = inside ? q[k] * e(i) : 0.0;
    }
  }
  Embedding out{EmbeddingKind::sheet, N, std::move(c), declared};
  return out;
}

Eigen::MatrixXd covariance_operator(const Embedding& e) {
  return e.coeff * e.coeff.transpose();
}

Eigen::MatrixXd apply_many(const CylFbm& B,
                           const std::vector<std::pair<double, Eigen::VectorXd>>& queries) {
  const int Q = static_cast<int>(queries.size());
  std::vector<int> node(Q);
  for (int q = 0; q < Q; ++q) {
    node[q] = B.grid.node_index(queries[q].first);
    if (node[q] < 0) throw std::domain_error("apply_many: time must be a grid node");
    if (queries[q].second.size() != B.embedding.dim_u())
      throw std::invalid_argument("apply_many: functional dimension mismatch");
  }

  std::vector<int> order(Q);
  for (int q = 0; q < Q; ++q) order[q] = q;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return node[a] < node[b]; });

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(B.n_paths, Q);
  for (int k = 0; k < B.embedding.truncation; ++k) {
    const Eigen::MatrixXd inc = fbm::sample_increments(B.grid, B.hurst, 0, B.n_paths,
                                                       rng::component_seed(B.seed, k));
    // walk nodes in increasing order, accumulating the path value of b_k
    Eigen::VectorXd bk = Eigen::VectorXd::Zero(B.n_paths);
    int at = 0;
    for (int q : order) {
      while (at < node[q]) {
        bk += inc.col(at);
        ++at;
      }
      const double gamma = B.embedding.coeff.col(k).dot(queries[q].second);
      if (gamma != 0.0)
        kernels::axpy(gamma, bk.data(), out.col(q).data(), B.n_paths);
    }
  }
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::genuine: return "genuine";
    case Verdict::cylindrical_only: return "cylindrical-only";
    default: return "inconclusive";
  }
}

GenuineReport tail_verdict(const std::vector<double>& terms,
                           std::optional<double> declared, double band) {
  GenuineReport r;
  r.partial_sums.resize(terms.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    acc += terms[k];
    r.partial_sums[k] = acc;
  }

  bool all_zero = true;
  for (double t : terms)
    if (t != 0.0) all_zero = false;
  if (all_zero) {
    r.verdict = Verdict::genuine;
    r.exponent = std::numeric_limits<double>::infinity();
    r.exponent_declared = false;
    return r;
  }

  if (declared) {
    r.exponent = *declared;
    r.exponent_declared = true;
    r.verdict = *declared > 1.0 ? Verdict::genuine : Verdict::cylindrical_only;
    return r;
  }

  // fit terms ~ C k^{-p} on the upper half of the stored prefix
  const std::size_t n = terms.size();
  const std::size_t lo = n / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long cnt = 0;
  for (std::size_t k = lo; k < n; ++k) {
    if (!(terms[k] > 0.0)) continue;
    const double x = std::log(static_cast<double>(k + 1));
    const double y = std::log(terms[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt < 3) {
    r.verdict = Verdict::inconclusive;
    r.exponent = 0.0;
    r.exponent_declared = false;
    return r;
  }
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  r.exponent = -slope;
  r.exponent_declared = false;
  if (r.exponent > 1.0 + band)
    r.verdict = Verdict::genuine;
  else if (r.exponent < 1.0 - band)
    r.verdict = Verdict::cylindrical_only;
  else
    r.verdict = Verdict::inconclusive;
  return r;
}

GenuineReport is_genuine(const Embedding& e, int N, double band) {
  if (N < 1 || N > e.truncation)
    throw std::invalid_argument("is_genuine: N must be within the stored truncation");
  std::vector<double> terms(N);
  for (int k = 0; k < N; ++k) terms[k] = e.norm_sq(k);
  return tail_verdict(terms, e.declared_exponent, band);
}

} // namespace cylfbm::cyl
