#include "cylfbm/fracops.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "cylfbm/fbm.hpp"
#include "cylfbm/kernels.hpp"
#include "cylfbm/quad.hpp"
#include "cylfbm/special.hpp"

namespace cylfbm::fracops {

namespace {

using special::gamma_fn;

// Exact moments of u^p against a linear interpolant on one cell.
// Requires u0 > 0, or p > -1 when u0 == 0.
struct CellWalk {
  double p1, p2;
  double pow_p1, pow_p2; // at the current left edge
  explicit CellWalk(double p, double u0) : p1(p + 1.0), p2(p + 2.0) {
    pow_p1 = u0 > 0.0 ? std::pow(u0, p1) : 0.0;
    pow_p2 = u0 > 0.0 ? std::pow(u0, p2) : 0.0;
  }
  // advances to u1 and returns the contribution of [u0,u1]
  double step(double u0, double u1, double g0, double g1) {
    if (!(u1 > u0)) return 0.0;
    const double q1 = std::pow(u1, p1);
    const double q2 = std::pow(u1, p2);
    const double m0 = (q1 - pow_p1) / p1;
    const double m1 = (q2 - pow_p2) / p2 - u0 * m0;
    pow_p1 = q1;
    pow_p2 = q2;
    return g0 * m0 + (g1 - g0) / (u1 - u0) * m1;
  }
};

// \int_{u0}^{u1} u^p g(u) du, uniform cells, exact weight moments.
double power_range(double p, double u0, double u1,
                   const std::function<double(double)>& g, int m) {
  if (!(u1 > u0)) return 0.0;
  if (m < 2) m = 2;
  CellWalk walk(p, u0);
  const double h = (u1 - u0) / m;
  double s = 0.0;
  double ga = g(u0);
  for (int i = 0; i < m; ++i) {
    const double a = u0 + i * h;
    const double b = (i + 1 == m) ? u1 : u0 + (i + 1) * h;
    const double gb = g(b);
    s += walk.step(a, b, ga, gb);
    ga = gb;
  }
  return s;
}

std::vector<double> segment_edges(double a, double b, const std::vector<double>& jumps) {
  std::vector<double> e;
  e.push_back(a);
  for (double j : jumps)
    if (j > a && j < b) e.push_back(j);
  e.push_back(b);
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

// Samples nudged strictly inside a segment so that values at a jump edge take
// the limit from the segment's side, not the right-continuous convention.
struct InsideSampler {
  const std::function<double(double)>& f;
  double lo, hi;
  InsideSampler(const std::function<double(double)>& fn, double a, double b)
      : f(fn), lo(a + 1e-9 * (b - a)), hi(b - 1e-9 * (b - a)) {}
  double operator()(double x) const { return f(std::min(std::max(x, lo), hi)); }
};

// The first segment carries the weight singularity; length-proportional
// budgeting starves it when a jump sits just ahead of t.
int seg_cells(int quad_n, double len, double total, bool singular_end) {
  if (singular_end) return std::max(32, quad_n / 2);
  return std::max(16, static_cast<int>(quad_n / 2 * len / total));
}

double half_cell(const TimeGrid& g) { return 0.5 * g.step(); }

} // namespace

ScalarIntegrand from_sampled(const SampledFunction& f, int col) {
  auto sp = std::make_shared<SampledFunction>(f);
  return {[sp, col](double t) { return sp->eval_scalar(t, col); }, {}};
}

ScalarIntegrand from_simple(const SimpleFunction& f, int col) {
  auto sp = std::make_shared<SimpleFunction>(f);
  std::vector<double> jumps(sp->breakpoints.begin() + 1, sp->breakpoints.end() - 1);
  return {[sp, col](double t) { return sp->eval_scalar(t, col); }, std::move(jumps)};
}

// ---- pointwise machinery --------------------------------------------------

double frac_integral_at(const ScalarIntegrand& fi, double T, double alpha, double t,
                        int quad_n) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::domain_error("frac_integral_at: alpha must be in (0,1)");
  if (t >= T) return 0.0;
  const auto edges = segment_edges(t, T, fi.jumps);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i], b = edges[i + 1];
    const int m = seg_cells(quad_n, b - a, T - t, a == t);
    const InsideSampler fs(fi.f, a, b);
    if (a == t) {
      s += quad::power_weight_integral(
          alpha - 1.0, b - t, [&](double u) { return fs(t + u); }, m, 2.0);
    } else {
      s += power_range(alpha - 1.0, a - t, b - t, [&](double u) { return fs(t + u); }, m);
    }
  }
  return s / gamma_fn(alpha);
}

double frac_derivative_at(const ScalarIntegrand& fi, double T, double alpha, double t,
                          int quad_n) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::domain_error("frac_derivative_at: alpha must be in (0,1)");
  if (!(t < T)) throw std::domain_error("frac_derivative_at: t must be below T");
  const double ft = fi.f(t);
  const double boundary = ft * std::pow(T - t, -alpha);

  const auto edges = segment_edges(t, T, fi.jumps);
  double J = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i], b = edges[i + 1];
    const int m = seg_cells(quad_n, b - a, T - t, a == t);
    const InsideSampler fs(fi.f, a, b);
    if (a == t) {
      // graded cells toward the singular end; first cell integrated with the
      // linear behaviour of f(t)-f(s) taken analytically
      const double L = b - t;
      double u_prev = L / (static_cast<double>(m) * m);
      double d_prev = ft - fs(t + u_prev);
      J += d_prev / u_prev * std::pow(u_prev, 1.0 - alpha) / (1.0 - alpha);
      CellWalk walk(-1.0 - alpha, u_prev);
      for (int k = 1; k < m; ++k) {
        const double r = static_cast<double>(k + 1) / m;
        const double u = (k + 1 == m) ? L : L * r * r;
        const double d = ft - fs(t + u);
        J += walk.step(u_prev, u, d_prev, d);
        u_prev = u;
        d_prev = d;
      }
    } else {
      J += power_range(-1.0 - alpha, a - t, b - t,
                       [&](double u) { return ft - fs(t + u); }, m);
    }
  }
  return (boundary + alpha * J) / gamma_fn(1.0 - alpha);
}

namespace {

ScalarIntegrand power_weighted(const ScalarIntegrand& fi, double expo) {
  auto base = fi.f;
  return {[base, expo](double s) { return std::pow(s, expo) * base(s); }, fi.jumps};
}

} // namespace

double kstar_at(const ScalarIntegrand& fi, double T, const Hurst& h, double t, int quad_n) {
  const double H = h.value();
  const double bh = fbm::b_h_constant(h);
  const ScalarIntegrand w = power_weighted(fi, H - 0.5);
  if (h.high()) {
    if (!(t > 0.0)) throw std::domain_error("kstar_at: t must be positive for H > 1/2");
    if (t >= T) return 0.0;
    const double alpha = H - 0.5;
    return bh * gamma_fn(alpha) * std::pow(t, 0.5 - H) *
           frac_integral_at(w, T, alpha, t, quad_n);
  }
  if (!(t > 0.0) || !(t < T))
    throw std::domain_error("kstar_at: t must be inside (0,T) for H < 1/2");
  const double alpha = 0.5 - H;
  return bh * gamma_fn(H + 0.5) * std::pow(t, 0.5 - H) *
         frac_derivative_at(w, T, alpha, t, quad_n);
}

double kstar_direct_at(const ScalarIntegrand& fi, double T, const Hurst& h, double t,
                       int quad_n) {
  const double H = h.value();
  const double bh = fbm::b_h_constant(h);

  if (h.high()) {
    if (!(t > 0.0)) throw std::domain_error("kstar_direct_at: t must be positive");
    if (t >= T) return 0.0;
    const auto edges = segment_edges(t, T, fi.jumps);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      const double a = edges[i], b = edges[i + 1];
      const int m = seg_cells(quad_n, b - a, T - t, a == t);
      const InsideSampler fs(fi.f, a, b);
      if (a == t) {
        s += 2.0 * quad::power_weight_integral(
                       2.0 * H - 2.0, std::sqrt(b - t),
                       [&](double v) {
                         const double x = t + v * v;
                         return fs(x) * std::pow(x, H - 0.5);
                       },
                       m, 2.0);
      } else {
        s += power_range(H - 1.5, a - t, b - t,
                         [&](double u) {
                           const double x = t + u;
                           return fs(x) * std::pow(x, H - 0.5);
                         },
                         m);
      }
    }
    return bh * std::pow(t, 0.5 - H) * s;
  }

  if (!(t > 0.0) || !(t < T))
    throw std::domain_error("kstar_direct_at: t must be inside (0,T)");
  const double ft = fi.f(t);
  const auto edges = segment_edges(t, T, fi.jumps);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i], b = edges[i + 1];
    const int m = seg_cells(quad_n, b - a, T - t, a == t);
    const InsideSampler fs(fi.f, a, b);
    auto g = [&](double u) {
      const double x = t + u;
      return (fs(x) - ft) * std::pow(x, H - 0.5);
    };
    if (a == t) {
      // graded cells toward t; the first cell uses the linear vanishing of
      // f(s)-f(t) with the smooth s^{H-1/2} factor frozen mid-cell
      const double L = b - t;
      double u_prev = L / (static_cast<double>(m) * m);
      const double slope = (fs(t + u_prev) - ft) / u_prev;
      s += slope * std::pow(t + 0.5 * u_prev, H - 0.5) *
           std::pow(u_prev, H + 0.5) / (H + 0.5);
      CellWalk walk(H - 1.5, u_prev);
      double g_prev = g(u_prev);
      for (int k = 1; k < m; ++k) {
        const double r = static_cast<double>(k + 1) / m;
        const double u = (k + 1 == m) ? L : L * r * r;
        const double gu = g(u);
        s += walk.step(u_prev, u, g_prev, gu);
        u_prev = u;
        g_prev = gu;
      }
    } else {
      s += power_range(H - 1.5, a - t, b - t, g, m);
    }
  }
  return ft * fbm::kernel_kappa(T, t, h, quad_n) +
         bh * (H - 0.5) * std::pow(t, 0.5 - H) * s;
}

double g_f_at(const ScalarIntegrand& fi, double T, const Hurst& h, double s, int quad_n) {
  if (!h.low()) throw std::domain_error("g_f_at: defined for H < 1/2 only");
  if (!(s > 0.0) || !(s < T)) throw std::domain_error("g_f_at: s must be inside (0,T)");
  const double H = h.value();
  const double bh = fbm::b_h_constant(h);
  const double gs = std::pow(s, H - 0.5) * fi.f(s);
  const double inner = quad::tanh_sinh_segmented(
      [&](double t, double, double) {
        const double dist = t - s;
        if (dist < 1e-9 * (T - s)) return 0.0;
        const double gt = std::pow(t, H - 0.5) * fi.f(t);
        return (gs - gt) * std::pow(dist, H - 1.5);
      },
      s, T, fi.jumps, std::max(128, quad_n / 4));
  return bh * (fi.f(s) * std::pow(T - s, H - 0.5) +
               (0.5 - H) * std::pow(s, 0.5 - H) * inner);
}

double weyl_marchaud_at(const ScalarIntegrand& fi, double T, double alpha, Side side,
                        double r, int quad_n) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::domain_error("weyl_marchaud_at: alpha must be in (0,1)");
  const double fr = (r >= 0.0 && r <= T) ? fi.f(r) : 0.0;
  // support distance of the finite part and location of the zero-extension edge
  const double span = side == Side::plus ? r : T - r;
  if (span <= 0.0) {
    // beyond the support on the relevant side; everything vanishes
    if ((side == Side::plus && r <= 0.0) || (side == Side::minus && r >= T)) return 0.0;
  }
  const double signdir = side == Side::plus ? -1.0 : 1.0;
  // jumps of s |-> f(r + signdir*s) inside (0, span), including the support
  // edges of the zero extension
  std::vector<double> sjumps;
  auto add_jump = [&](double j) {
    const double sj = side == Side::plus ? r - j : j - r;
    if (sj > 0.0 && sj < span) sjumps.push_back(sj);
  };
  for (double j : fi.jumps) add_jump(j);
  add_jump(0.0);
  add_jump(T);
  std::sort(sjumps.begin(), sjumps.end());

  double J = 0.0;
  const auto edges = segment_edges(0.0, span, sjumps);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i], b = edges[i + 1];
    const int m = seg_cells(quad_n, b - a, span, a == 0.0);
    const double inset = 1e-9 * (b - a);
    auto diff = [&](double s) {
      const double sc = std::min(std::max(s, a + inset), b - inset);
      const double x = r + signdir * sc;
      return fr - ((x >= 0.0 && x <= T) ? fi.f(x) : 0.0);
    };
    if (a == 0.0) {
      const double L = b;
      double u_prev = L / (static_cast<double>(m) * m);
      double d_prev = diff(u_prev);
      J += d_prev / u_prev * std::pow(u_prev, 1.0 - alpha) / (1.0 - alpha);
      CellWalk walk(-1.0 - alpha, u_prev);
      for (int k = 1; k < m; ++k) {
        const double rr = static_cast<double>(k + 1) / m;
        const double u = (k + 1 == m) ? L : L * rr * rr;
        const double d = diff(u);
        J += walk.step(u_prev, u, d_prev, d);
        u_prev = u;
        d_prev = d;
      }
    } else {
      J += power_range(-1.0 - alpha, a, b, diff, m);
    }
  }
  // zero extension beyond the support edge: f(r -+ s) = 0 there
  if (span > 0.0) J += fr * std::pow(span, -alpha) / alpha;
  return alpha / gamma_fn(1.0 - alpha) * J;
}

double weyl_marchaud_simple_at(const SimpleFunction& f, double alpha, Side side, double r,
                               int col) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::domain_error("weyl_marchaud_simple_at: alpha must be in (0,1)");
  const double T = f.horizon();
  const double fr = f.eval_scalar(r, col);
  const int n = static_cast<int>(f.pieces.rows());
  double J = 0.0;
  auto tail_moment = [alpha](double a, double b) {
    // \int_a^b s^{-1-alpha} ds, a may be 0 only with zero coefficient
    const double hi = std::pow(b, -alpha);
    const double lo = a > 0.0 ? std::pow(a, -alpha) : 0.0;
    return (lo - hi) / alpha;
  };
  for (int i = 0; i < n; ++i) {
    const double t0 = f.breakpoints[i], t1 = f.breakpoints[i + 1];
    double a, b; // s-range mapping into piece i
    if (side == Side::plus) {
      a = r - t1;
      b = r - t0;
    } else {
      a = t0 - r;
      b = t1 - r;
    }
    a = std::max(a, 0.0);
    if (!(b > a)) continue;
    const double coeff = fr - f.pieces(i, col);
    if (coeff == 0.0) continue;
    if (a == 0.0)
      throw std::domain_error("weyl_marchaud_simple_at: r must not be a breakpoint");
    J += coeff * tail_moment(a, b);
  }
  // beyond the support (f = 0 there)
  if (side == Side::plus) {
    if (r > 0.0)
      J += fr * std::pow(r, -alpha) / alpha;
  } else {
    if (r < T)
      J += fr * std::pow(T - r, -alpha) / alpha;
    // for r beyond T both f(r) and f(r+s) vanish
  }
  return alpha / gamma_fn(1.0 - alpha) * J;
}

// ---- grid operators -------------------------------------------------------

namespace {

struct PowerMoments {
  std::vector<double> A, B; // weights for f_{j+d} and f_{j+d+1}
};

// moments of (s-t)^{alpha-1} against linear interpolation, offsets d*h
PowerMoments integral_moments(int n, double h, double alpha) {
  PowerMoments pm;
  pm.A.resize(n);
  pm.B.resize(n);
  double pow_a = 0.0, pow_a1 = 0.0; // u^alpha, u^{alpha+1} at left edge
  for (int d = 0; d < n; ++d) {
    const double u1 = (d + 1.0) * h;
    const double q = std::pow(u1, alpha);
    const double q1 = q * u1;
    const double m0 = (q - pow_a) / alpha;
    const double m1 = (q1 - pow_a1) / (alpha + 1.0) - d * h * m0;
    pm.A[d] = m0 - m1 / h;
    pm.B[d] = m1 / h;
    pow_a = q;
    pow_a1 = q1;
  }
  return pm;
}

struct DerivMoments {
  std::vector<double> M0, C, E; // d >= 1; C = M0 - E, E = M1/h
  std::vector<double> S0;       // prefix sums of M0
  double first;                 // h^{-alpha} / (1-alpha), first-cell factor
};

DerivMoments derivative_moments(int n, double h, double alpha) {
  DerivMoments dm;
  dm.M0.assign(n, 0.0);
  dm.C.assign(n, 0.0);
  dm.E.assign(n, 0.0);
  dm.S0.assign(n + 1, 0.0);
  dm.first = std::pow(h, -alpha) / (1.0 - alpha);
  double pow_ma = std::pow(h, -alpha);       // u^{-alpha} at left edge (d=1)
  double pow_1a = std::pow(h, 1.0 - alpha);  // u^{1-alpha} at left edge
  for (int d = 1; d < n; ++d) {
    const double u1 = (d + 1.0) * h;
    const double qa = std::pow(u1, -alpha);
    const double q1 = std::pow(u1, 1.0 - alpha);
    const double m0 = (pow_ma - qa) / alpha;
    const double m1 = (q1 - pow_1a) / (1.0 - alpha) - d * h * m0;
    dm.M0[d] = m0;
    dm.E[d] = m1 / h;
    dm.C[d] = m0 - dm.E[d];
    pow_ma = qa;
    pow_1a = q1;
  }
  for (int d = 1; d < n; ++d) dm.S0[d + 1] = dm.S0[d] + dm.M0[d];
  return dm;
}

} // namespace

SampledFunction frac_integral(const SampledFunction& f, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::domain_error("frac_integral: alpha must be in (0,1)");
  const int n = f.grid.steps();
  const double h = f.grid.step();
  const auto pm = integral_moments(n, h, alpha);
  const double inv_gamma = 1.0 / gamma_fn(alpha);

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n + 1, f.dim());
  for (int c = 0; c < f.dim(); ++c) {
    const double* fc = f.values.col(c).data();
    for (int j = 0; j < n; ++j) {
      const std::size_t L = n - j;
      const double s = kernels::dot(pm.A.data(), fc + j, L) +
                       kernels::dot(pm.B.data(), fc + j + 1, L);
      out(j, c) = inv_gamma * s;
    }
  }
  return {f.grid, std::move(out)};
}

SampledFunction frac_derivative(const SampledFunction& f, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::domain_error("frac_derivative: alpha must be in (0,1)");
  const int n = f.grid.steps();
  if (n < 3) throw std::invalid_argument("frac_derivative: need at least 3 grid steps");
  const double h = f.grid.step();
  const double T = f.grid.horizon();
  const auto dm = derivative_moments(n, h, alpha);
  const double inv_gamma = 1.0 / gamma_fn(1.0 - alpha);

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n + 1, f.dim());
  Eigen::VectorXd peeled(n + 1);
  for (int c = 0; c < f.dim(); ++c) {
    const double* fc = f.values.col(c).data();

    // Samples vanishing at T like c (T-t)^beta defeat piecewise-linear product
    // integration on the trailing cells; peel the fitted power off and
    // differentiate it in closed form: D^a (T-.)^b = G(b+1)/G(b+1-a) (T-.)^{b-a}.
    double cpow = 0.0, beta = 0.0;
    const double ratio = fc[n - 1] != 0.0 ? fc[n - 2] / fc[n - 1] : 0.0;
    const bool split = fc[n] == 0.0 && ratio > 1.0 && std::isfinite(ratio) &&
                       std::log2(ratio) < 4.0;
    if (split) {
      beta = std::log2(ratio);
      cpow = fc[n - 1] / std::pow(h, beta);
      for (int j = 0; j <= n; ++j)
        peeled(j) = fc[j] - cpow * std::pow(T - f.grid.node(j), beta);
      peeled(n) = 0.0;
      fc = peeled.data();
    }

    for (int j = 0; j < n; ++j) {
      const std::size_t L = n - j;
      const double fj = fc[j];
      double J = (fj - fc[j + 1]) * dm.first;
      if (L >= 2) {
        J += fj * dm.S0[L];
        J -= kernels::dot(dm.C.data() + 1, fc + j + 1, L - 1);
        J -= kernels::dot(dm.E.data() + 1, fc + j + 2, L - 1);
      }
      const double boundary = fj * std::pow(T - f.grid.node(j), -alpha);
      out(j, c) = inv_gamma * (boundary + alpha * J);
    }
    if (split) {
      const double factor = cpow * gamma_fn(beta + 1.0) / gamma_fn(beta + 1.0 - alpha);
      for (int j = 0; j < n; ++j)
        out(j, c) += factor * std::pow(T - f.grid.node(j), beta - alpha);
    }
    out(n, c) = 2.0 * out(n - 1, c) - out(n - 2, c);
  }
  return {f.grid, std::move(out)};
}

namespace {

// node evaluation times with half-cell conventions at singular endpoints
double node_eval_time(const TimeGrid& g, int j, const Hurst& h) {
  if (j == 0) return half_cell(g);
  if (j == g.steps() && h.low()) return g.horizon() - half_cell(g);
  return g.node(j);
}

template <typename PointEval>
SampledFunction grid_transform(const SampledFunction& f, const Hurst& h,
                               PointEval&& eval) {
  const int n = f.grid.steps();
  Eigen::MatrixXd out(n + 1, f.dim());
  for (int c = 0; c < f.dim(); ++c) {
    const auto fi = from_sampled(f, c);
    for (int j = 0; j <= n; ++j) {
      if (j == n && h.high()) {
        out(j, c) = 0.0; // empty integral at t = T in the high regime
        continue;
      }
      out(j, c) = eval(fi, node_eval_time(f.grid, j, h));
    }
  }
  return {f.grid, std::move(out)};
}

} // namespace

SampledFunction kstar(const SampledFunction& f, const Hurst& h, int quad_n) {
  const double T = f.grid.horizon();
  return grid_transform(f, h, [&](const ScalarIntegrand& fi, double t) {
    return kstar_at(fi, T, h, t, quad_n);
  });
}

SampledFunction kstar_direct_form(const SampledFunction& f, const Hurst& h, int quad_n) {
  const double T = f.grid.horizon();
  return grid_transform(f, h, [&](const ScalarIntegrand& fi, double t) {
    return kstar_direct_at(fi, T, h, t, quad_n);
  });
}

SampledFunction g_f_form(const SampledFunction& f, const Hurst& h, int quad_n) {
  if (!h.low()) throw std::domain_error("g_f_form: defined for H < 1/2 only");
  const double T = f.grid.horizon();
  const int n = f.grid.steps();
  Eigen::MatrixXd out(n + 1, f.dim());
  for (int c = 0; c < f.dim(); ++c) {
    const auto fi = from_sampled(f, c);
    for (int j = 0; j <= n; ++j) {
      double s = f.grid.node(j);
      if (j == 0) s = half_cell(f.grid);
      if (j == n) s = T - half_cell(f.grid);
      out(j, c) = g_f_at(fi, T, h, s, quad_n);
    }
  }
  return {f.grid, std::move(out)};
}

double m_inner_simple(const SimpleFunction& f, const SimpleFunction& g, const Hurst& h) {
  if (f.dim() != g.dim())
    throw std::invalid_argument("m_inner_simple: dimensions must match");
  // rewrite as signed combinations of 1_{[0,u)}
  struct Term {
    Eigen::VectorXd x;
    double u;
  };
  auto decompose = [](const SimpleFunction& s) {
    std::vector<Term> terms;
    for (Eigen::Index i = 0; i < s.pieces.rows(); ++i) {
      const double t0 = s.breakpoints[i], t1 = s.breakpoints[i + 1];
      if (t1 > 0.0) terms.push_back({s.pieces.row(i).transpose(), t1});
      if (t0 > 0.0) terms.push_back({-s.pieces.row(i).transpose(), t0});
    }
    return terms;
  };
  const auto tf = decompose(f);
  const auto tg = decompose(g);
  double total = 0.0;
  for (const auto& a : tf)
    for (const auto& b : tg)
      total += a.x.dot(b.x) * fbm::covariance(a.u, b.u, h);
  return total;
}

namespace {

// second antiderivative of |x|^{2H-2}
inline double f2(double x, double twoH) {
  return std::pow(std::abs(x), twoH) / (twoH * (twoH - 1.0));
}

// Diagonal-grouped product integration of
//   sum_{i,j} phi_i psi_j \int\int_{cell_i x cell_j} |s-t|^{2H-2}
// for midpoint values phi, psi on a uniform grid of `cells` cells of width h.
double weighted_double_sum(std::span<const double> phi, std::span<const double> psi,
                           double h, double twoH) {
  const std::size_t cells = phi.size();
  std::vector<double> w(cells);
  // W(d) = F2((d+1)h) - 2 F2(dh) + F2((d-1)h)
  for (std::size_t d = 0; d < cells; ++d) {
    const double x0 = (static_cast<double>(d) - 1.0) * h;
    const double x1 = static_cast<double>(d) * h;
    const double x2 = (static_cast<double>(d) + 1.0) * h;
    w[d] = f2(x2, twoH) - 2.0 * f2(x1, twoH) + f2(x0, twoH);
  }
  double s = w[0] * kernels::dot(phi.data(), psi.data(), cells);
  for (std::size_t d = 1; d < cells; ++d) {
    const std::size_t L = cells - d;
    s += w[d] * (kernels::dot(phi.data(), psi.data() + d, L) +
                 kernels::dot(phi.data() + d, psi.data(), L));
  }
  return s;
}

} // namespace

double abs_m_norm(const SampledFunction& f, const Hurst& h) {
  if (!h.high()) throw std::domain_error("abs_m_norm: defined for H > 1/2 only");
  const int n = f.grid.steps();
  std::vector<double> phi(n);
  for (int i = 0; i < n; ++i)
    phi[i] = 0.5 * (f.values.row(i) + f.values.row(i + 1)).norm();
  const double twoH = 2.0 * h.value();
  const double s = weighted_double_sum(phi, phi, f.grid.step(), twoH);
  return std::sqrt(h.value() * (twoH - 1.0) * s);
}

double m_inner_high(const SampledFunction& f, const SampledFunction& g, const Hurst& h) {
  if (!h.high()) throw std::domain_error("m_inner_high: defined for H > 1/2 only");
  if (f.dim() != g.dim() || !(f.grid == g.grid))
    throw std::invalid_argument("m_inner_high: functions must share grid and dimension");
  const int n = f.grid.steps();
  const double twoH = 2.0 * h.value();
  double total = 0.0;
  std::vector<double> phi(n), psi(n);
  for (int c = 0; c < f.dim(); ++c) {
    for (int i = 0; i < n; ++i) {
      phi[i] = 0.5 * (f.values(i, c) + f.values(i + 1, c));
      psi[i] = 0.5 * (g.values(i, c) + g.values(i + 1, c));
    }
    total += weighted_double_sum(phi, psi, f.grid.step(), twoH);
  }
  return h.value() * (twoH - 1.0) * total;
}

SampledFunction weyl_marchaud(const SampledFunction& f, double alpha, Side side) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::domain_error("weyl_marchaud: alpha must be in (0,1)");
  const int n = f.grid.steps();
  const double h = f.grid.step();
  const double T = f.grid.horizon();
  const auto dm = derivative_moments(n + 1, h, alpha);
  const double pref = alpha / gamma_fn(1.0 - alpha);

  Eigen::MatrixXd out(n + 1, f.dim());
  for (int c = 0; c < f.dim(); ++c) {
    const double* fc = f.values.col(c).data();
    for (int j = 0; j <= n; ++j) {
      // number of whole cells in the finite part
      const int L = side == Side::plus ? j : n - j;
      const double r = f.grid.node(j);
      const double span = side == Side::plus ? r : T - r;
      if (L == 0) {
        // singular boundary of the zero extension: half-cell convention
        const auto fi = from_sampled(f, c);
        const double rr = side == Side::plus ? 0.5 * h : T - 0.5 * h;
        out(j, c) = weyl_marchaud_at(fi, T, alpha, side, rr);
        continue;
      }
      const double fj = fc[j];
      const int dir = side == Side::plus ? -1 : 1;
      double J = (fj - fc[j + dir]) * dm.first;
      if (L >= 2) {
        J += fj * dm.S0[L];
        for (int d = 1; d < L; ++d)
          J -= dm.C[d] * fc[j + dir * d] + dm.E[d] * fc[j + dir * (d + 1)];
      }
      J += fj * std::pow(span, -alpha) / alpha;
      out(j, c) = pref * J;
    }
  }
  return {f.grid, std::move(out)};
}

SampledFunction restrict_fn(const SampledFunction& f, double t, bool reflect) {
  const int k = f.grid.node_index(t);
  if (k < 1) throw std::domain_error("restrict_fn: t must be a positive grid node");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(f.grid.nodes_count(), f.dim());
  for (int j = 0; j <= k; ++j) out.row(j) = reflect ? f.values.row(k - j) : f.values.row(j);
  return {f.grid, std::move(out)};
}

// ---- norms ----------------------------------------------------------------

double kstar_l2_norm_sq(const ScalarIntegrand& fi, double T, const Hurst& h, int outer_n,
                        int quad_n) {
  return quad::tanh_sinh_segmented(
      [&](double t, double, double) {
        const double v = kstar_at(fi, T, h, t, quad_n);
        return v * v;
      },
      0.0, T, fi.jumps, outer_n);
}

namespace {

double m_norm_sq_high_scalar(const ScalarIntegrand& fi, double T, const Hurst& h, int n) {
  const double twoH = 2.0 * h.value();
  if (fi.jumps.empty()) {
    const double hh = T / n;
    std::vector<double> phi(n);
    for (int i = 0; i < n; ++i) phi[i] = fi.f((i + 0.5) * hh);
    return h.value() * (twoH - 1.0) * weighted_double_sum(phi, phi, hh, twoH);
  }
  // cells aligned with the jumps; pairwise exact weights
  const auto edges0 = segment_edges(0.0, T, fi.jumps);
  std::vector<double> edges;
  const int target = std::min(n, 1024);
  for (std::size_t i = 0; i + 1 < edges0.size(); ++i) {
    const double a = edges0[i], b = edges0[i + 1];
    const int m = std::max(8, static_cast<int>(target * (b - a) / T));
    for (int k = 0; k < m; ++k) edges.push_back(a + (b - a) * k / m);
  }
  edges.push_back(T);
  const int K = static_cast<int>(edges.size()) - 1;
  std::vector<double> phi(K);
  for (int i = 0; i < K; ++i) phi[i] = fi.f(0.5 * (edges[i] + edges[i + 1]));
  double s = 0.0;
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) {
      const double w = f2(edges[j + 1] - edges[i], twoH) - f2(edges[j] - edges[i], twoH) -
                       f2(edges[j + 1] - edges[i + 1], twoH) +
                       f2(edges[j] - edges[i + 1], twoH);
      s += phi[i] * phi[j] * w;
    }
  }
  return h.value() * (twoH - 1.0) * s;
}

} // namespace

double m_norm_sq_scalar(const ScalarIntegrand& fi, double T, const Hurst& h, int n) {
  if (h.high()) return m_norm_sq_high_scalar(fi, T, h, n);
  const int q = std::max(256, n / 4);
  return kstar_l2_norm_sq(fi, T, h, q, q);
}

double m_norm_sq(const SampledFunction& f, const Hurst& h, int n) {
  double s = 0.0;
  for (int c = 0; c < f.dim(); ++c) s += m_norm_sq_scalar(from_sampled(f, c), f.grid.horizon(), h, n);
  return s;
}

double h_alpha_norm(const SampledFunction& f, const Hurst& h) {
  if (!h.low()) throw std::domain_error("h_alpha_norm: defined for H < 1/2 only");
  return l2_norm(frac_derivative(f, 0.5 - h.value()));
}

double l2_norm(const SampledFunction& f) {
  const int n = f.grid.steps();
  std::vector<double> sq(n + 1);
  for (int j = 0; j <= n; ++j) sq[j] = f.values.row(j).squaredNorm();
  return std::sqrt(quad::trapezoid(sq, f.grid.step()));
}

double weighted_pow_double_sum(std::span<const double> phi, std::span<const double> psi,
                               double h, double twoH) {
  return weighted_double_sum(phi, psi, h, twoH);
}

} // namespace cylfbm::fracops
