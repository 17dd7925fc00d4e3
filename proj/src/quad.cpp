#include "cylfbm/quad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cylfbm/kernels.hpp"

namespace cylfbm::quad {

namespace {
constexpr double kUMax = 3.9; // weights below ~1e-33 beyond this
}

double tanh_sinh(const SingularAware& f, double a, double b, int n) {
  if (!(b > a)) return 0.0;
  if (n < 8) n = 8;
  const double half = 0.5 * (b - a);
  const double du = 2.0 * kUMax / n;
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    const double u = -kUMax + (j + 0.5) * du;
    const double w = 0.5 * M_PI * std::sinh(u);
    // 1 -+ tanh(|w|) computed via exp to avoid cancellation
    const double e = std::exp(-2.0 * std::abs(w));
    const double near = 2.0 * e / (1.0 + e); // 1 - tanh(|w|)
    const double far = 2.0 / (1.0 + e);      // 1 + tanh(|w|)
    double x, da, db;
    if (u < 0.0) {
      da = half * near;
      db = half * far;
      x = a + da;
    } else {
      db = half * near;
      da = half * far;
      x = b - db;
    }
    // deep nodes can round onto the endpoints where integrands are singular
    if (!(x > a) || !(x < b)) continue;
    const double ch = std::cosh(w);
    const double weight = half * (0.5 * M_PI) * std::cosh(u) / (ch * ch) * du;
    s += weight * f(x, da, db);
  }
  return s;
}

double tanh_sinh_segmented(const SingularAware& f, double a, double b,
                           std::span<const double> cuts, int n) {
  std::vector<double> edges;
  edges.push_back(a);
  for (double c : cuts)
    if (c > a && c < b) edges.push_back(c);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const int pieces = static_cast<int>(edges.size()) - 1;
  const int per = std::max(32, n / std::max(1, pieces));
  double s = 0.0;
  for (int i = 0; i < pieces; ++i) s += tanh_sinh(f, edges[i], edges[i + 1], per);
  return s;
}

double power_weight_integral(double p, double L, const std::function<double(double)>& g,
                             int m, double grade) {
  if (!(p > -1.0)) throw std::domain_error("power_weight_integral: need p > -1");
  if (!(L > 0.0)) return 0.0;
  if (m < 2) m = 2;

  std::vector<double> v(m + 1), gv(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double r = static_cast<double>(i) / m;
    v[i] = L * (grade == 1.0 ? r : std::pow(r, grade));
    gv[i] = g(v[i]);
  }

  double s = 0.0;
  const double p1 = p + 1.0, p2 = p + 2.0;
  double pow_p1_lo = 0.0, pow_p2_lo = 0.0; // v[0] = 0
  for (int i = 0; i < m; ++i) {
    const double hi = v[i + 1];
    if (!(hi > v[i])) continue;
    const double pow_p1_hi = std::pow(hi, p1);
    const double pow_p2_hi = std::pow(hi, p2);
    const double m0 = (pow_p1_hi - pow_p1_lo) / p1;
    const double m1 = (pow_p2_hi - pow_p2_lo) / p2 - v[i] * m0;
    const double slope = (gv[i + 1] - gv[i]) / (hi - v[i]);
    s += gv[i] * m0 + slope * m1;
    pow_p1_lo = pow_p1_hi;
    pow_p2_lo = pow_p2_hi;
  }
  return s;
}

double power_weight_range(double p, double a, double b,
                          const std::function<double(double)>& g, int m,
                          bool geometric) {
  if (!(a > 0.0) || !(b > a)) return 0.0;
  if (m < 2) m = 2;
  const double p1 = p + 1.0, p2 = p + 2.0;
  const double rho = geometric ? std::pow(b / a, 1.0 / m) : 0.0;
  double u_prev = a;
  double g_prev = g(a);
  double pow1 = std::pow(a, p1);
  double pow2 = std::pow(a, p2);
  double s = 0.0;
  for (int i = 1; i <= m; ++i) {
    const double u = (i == m) ? b : (geometric ? a * std::pow(rho, i) : a + (b - a) * i / m);
    if (!(u > u_prev)) continue; // cells can collapse over few-ulp ranges
    const double q1 = std::pow(u, p1);
    const double q2 = std::pow(u, p2);
    const double m0 = (q1 - pow1) / p1;
    const double m1 = (q2 - pow2) / p2 - u_prev * m0;
    const double gu = g(u);
    s += g_prev * m0 + (gu - g_prev) / (u - u_prev) * m1;
    u_prev = u;
    g_prev = gu;
    pow1 = q1;
    pow2 = q2;
  }
  return s;
}

double trapezoid(std::span<const double> values, double h) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double s = kernels::sum(values.data() + 1, n - 2);
  s += 0.5 * (values.front() + values.back());
  return s * h;
}

} // namespace cylfbm::quad
