#include "cylfbm/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "cylfbm/cauchy.hpp"
#include "cylfbm/cyl_process.hpp"
#include "cylfbm/fbm.hpp"
#include "cylfbm/fracops.hpp"
#include "cylfbm/harness.hpp"
#include "cylfbm/rng.hpp"
#include "cylfbm/special.hpp"
#include "cylfbm/stochint.hpp"
#include "cylfbm/types.hpp"
#include "cylfbm/wiener.hpp"

namespace cylfbm::validation {

namespace {

using harness::McReport;

std::string fmt_name(const char* base, const char* tag, int idx) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%s_%s_%02d", base, tag, idx);
  return buf;
}

CheckResult from_report(const std::string& name, const McReport& r) {
  return {name, r.pass, r.line(name)};
}

// tolerance-style line: estimate = observed, ref = tolerance
CheckResult from_tolerance(const std::string& name, double value, double tol) {
  McReport r;
  r.estimate = value;
  r.reference = tol;
  r.z_score = tol > 0.0 ? value / tol : 0.0;
  r.pass = value <= tol;
  return {name, r.pass, r.line(name)};
}

CheckResult from_flag(const std::string& name, bool pass, double est, double ref) {
  McReport r;
  r.estimate = est;
  r.reference = ref;
  r.z_score = 0.0;
  r.pass = pass;
  return {name, pass, r.line(name)};
}

std::vector<double> col(const Eigen::MatrixXd& m, int c) {
  return {m.col(c).data(), m.col(c).data() + m.rows()};
}

double rel_l2_diff(const SampledFunction& a, const SampledFunction& b) {
  Eigen::MatrixXd d = a.values - b.values;
  return std::sqrt(d.squaredNorm() / std::max(a.values.squaredNorm(), 1e-300));
}

} // namespace

// 1. Covariance law: empirical Cov(b(s), b(t)) against the closed form.
std::vector<CheckResult> check_covariance_law(const SuiteOptions& o) {
  std::vector<CheckResult> out;
  const int n_paths = o.quick ? 20000 : 100000;
  const TimeGrid grid(1.0, 64);
  for (double Hval : {0.25, 0.75}) {
    const Hurst h(Hval);
    const auto ps = fbm::sample_paths(grid, h, n_paths, o.seed + (Hval < 0.5 ? 1 : 2));
    auto eng = rng::stream(o.seed, 900 + (Hval < 0.5 ? 0 : 1));
    std::uniform_int_distribution<int> node(1, grid.steps());
    const char* tag = Hval < 0.5 ? "H25" : "H75";
    for (int p = 0; p < 20; ++p) {
      const int i = node(eng), j = node(eng);
      const double ref = fbm::covariance(grid.node(i), grid.node(j), h);
      const auto r = (i == j)
                         ? harness::mc_compare_variance(col(ps.paths, i), ref)
                         : harness::mc_compare_cov(col(ps.paths, i), col(ps.paths, j), ref);
      out.push_back(from_report(fmt_name("01_cov_law", tag, p), r));
    }
  }
  return out;
}

// 2. Kernel reconstruction of R(s,t) through kappa.
std::vector<CheckResult> check_kernel_reconstruction(const SuiteOptions& o) {
  std::vector<CheckResult> out;
  const int quad_n = o.quick ? 1024 : 2048;
  const std::pair<double, double> pairs[] = {
      {0.5, 1.0}, {0.3, 0.7}, {0.25, 0.9}, {0.6, 0.6}, {1.0, 1.0}};
  for (double Hval : {0.25, 0.75}) {
    const Hurst h(Hval);
    const char* tag = Hval < 0.5 ? "H25" : "H75";
    int idx = 0;
    for (auto [s, t] : pairs) {
      const double ref = fbm::covariance(s, t, h);
      const double rec = fbm::reconstruct_covariance(s, t, h, quad_n);
      out.push_back(from_tolerance(fmt_name("02_kernel_rec", tag, idx++),
                                   std::abs(rec - ref) / ref, 0.01));
    }
  }
  return out;
}

namespace {

SimpleFunction random_simple(const TimeGrid& grid, std::mt19937_64& eng, int max_pieces) {
  std::uniform_int_distribution<int> npieces(2, max_pieces);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  const int k = npieces(eng);
  std::vector<int> nodes;
  std::uniform_int_distribution<int> pick(1, grid.steps() - 1);
  while (static_cast<int>(nodes.size()) < k - 1) {
    const int c = pick(eng);
    if (std::find(nodes.begin(), nodes.end(), c) == nodes.end()) nodes.push_back(c);
  }
  std::sort(nodes.begin(), nodes.end());
  std::vector<double> breaks{0.0};
  for (int c : nodes) breaks.push_back(grid.node(c));
  breaks.push_back(grid.horizon());
  Eigen::MatrixXd pieces(k, 1);
  for (int i = 0; i < k; ++i) pieces(i, 0) = val(eng);
  return {breaks, pieces};
}

} // namespace

// 3. Wiener isometry: MC variance of the step-sum integral vs <f,f>_M.
std::vector<CheckResult> check_wiener_isometry(const SuiteOptions& o) {
  std::vector<CheckResult> out;
  const int n_paths = o.quick ? 20000 : 100000;
  const TimeGrid grid(2.0, 64);
  for (double Hval : {0.25, 0.75}) {
    const Hurst h(Hval);
    const auto ps = fbm::sample_paths(grid, h, n_paths, o.seed + (Hval < 0.5 ? 11 : 12));
    auto eng = rng::stream(o.seed, 910 + (Hval < 0.5 ? 0 : 1));
    const char* tag = Hval < 0.5 ? "H25" : "H75";
    for (int i = 0; i < 5; ++i) {
      const auto f = random_simple(grid, eng, 5);
      const double ref = wiener::second_moment_exact(f, h);
      const auto samples = wiener::integrate_simple(f, ps);
      const auto r = harness::mc_compare_variance(col(samples, 0), ref);
      out.push_back(from_report(fmt_name("03_wiener_iso", tag, i), r));
    }
  }
  return out;
}

// 4. K* isometry on step inputs plus the form cross-checks.
std::vector<CheckResult> check_kstar_isometry(const SuiteOptions& o) {
  std::vector<CheckResult> out;
  const int qn = o.quick ? 1024 : 2048;
  const int grid_n = o.quick ? 512 : 1024;

  const SimpleFunction f1({0.0, 1.0}, Eigen::MatrixXd::Constant(1, 1, 1.0));
  Eigen::MatrixXd p2(3, 1);
  p2 << 1.0, -0.5, 2.0;
  const SimpleFunction f2({0.0, 0.3, 0.7, 1.0}, p2);

  for (double Hval : {0.25, 0.75}) {
    const Hurst h(Hval);
    const char* tag = Hval < 0.5 ? "H25" : "H75";
    int idx = 0;
    for (const auto* f : {&f1, &f2}) {
      const double exact = fracops::m_inner_simple(*f, *f, h);
      const double viaK =
          fracops::kstar_l2_norm_sq(fracops::from_simple(*f), f->horizon(), h, 512, qn);
      out.push_back(from_tolerance(fmt_name("04_kstar_iso", tag, idx++),
                                   std::abs(viaK - exact) / exact, 0.01));
    }

    // rewrite vs kernel-derivative form on a smooth input
    const TimeGrid grid(1.0, grid_n);
    const auto fs = sample_scalar(grid, [](double t) { return std::sin(2.0 * t) + 1.2; });
    const auto a = fracops::kstar(fs, h, qn);
    const auto b = fracops::kstar_direct_form(fs, h, qn);
    out.push_back(
        from_tolerance(std::string("04_kstar_forms_") + tag, rel_l2_diff(a, b), 0.01));
  }

  // G_f factorisation, low regime
  {
    const Hurst h(0.25);
    const TimeGrid grid(1.0, grid_n);
    const auto fs = sample_scalar(grid, [](double t) { return std::exp(-t); });
    const auto a = fracops::kstar(fs, h, qn);
    const auto g = fracops::g_f_form(fs, h, qn);
    out.push_back(from_tolerance("04_gf_vs_kstar_H25", rel_l2_diff(a, g), 0.01));
  }
  return out;
}

// 5. Fractional inversion D^a(I^a f) = f with a fitted convergence rate.
std::vector<CheckResult> check_fractional_inversion(const SuiteOptions& o) {
  std::vector<CheckResult> out;
  const double alpha = 0.3;
  struct Case {
    const char* name;
    std::function<double(double)> f;
  };
  const Case cases[] = {{"sin", [](double t) { return std::sin(t); }},
                        {"exp", [](double t) { return std::exp(-t); }},
                        {"poly", [](double t) { return 1.0 + t + t * t; }}};
  const int ns[] = {512, 1024, 2048, 4096};
  for (const auto& c : cases) {
    std::vector<double> errs, hs;
    for (int n : ns) {
      const TimeGrid grid(1.0, n);
      const auto f = sample_scalar(grid, c.f);
      const auto rec = fracops::frac_derivative(fracops::frac_integral(f, alpha), alpha);
      errs.push_back(fracops::l2_norm({grid, rec.values - f.values}) /
                     fracops::l2_norm(f));
      hs.push_back(grid.step());
    }
    out.push_back(
        from_tolerance(std::string("05_inversion_err_") + c.name, errs.back(), 1e-3));
    const double rate = harness::convergence_rate(errs, hs);
    out.push_back(from_flag(std::string("05_inversion_rate_") + c.name, rate > 0.8, rate,
                            0.8));
  }
  (void)o;
  return out;
}

// 6. Reflection identity ||1_{[0,t]} f(t-.)||_M = ||1_{[0,t]} f||_M.
std::vector<CheckResult> check_reflection_identity(const SuiteOptions& o) {
  std::vector<CheckResult> out;
  const int n = o.quick ? 1024 : 2048;
  const double T = 1.0;
  auto base = [](double t) { return 1.0 + 0.5 * t + std::sin(2.0 * t) / 3.0; };
  for (double Hval : {0.25, 0.75}) {
    const Hurst h(Hval);
    const char* tag = Hval < 0.5 ? "H25" : "H75";
    int idx = 0;
    for (double t : {T / 4.0, T / 2.0, T}) {
      fracops::ScalarIntegrand plain{
          [base, t](double s) { return s <= t ? base(s) : 0.0; }, {}};
      fracops::ScalarIntegrand refl{
          [base, t](double s) { return s <= t ? base(t - s) : 0.0; }, {}};
      if (t < T) {
        plain.jumps = {t};
        refl.jumps = {t};
      }
      const double a = fracops::m_norm_sq_scalar(plain, T, h, n);
      const double b = fracops::m_norm_sq_scalar(refl, T, h, n);
      out.push_back(from_tolerance(fmt_name("06_reflection", tag, idx++),
                                   std::abs(a - b) / std::max(a, b), 0.01));
    }
  }
  return out;
}

// 7. Cylindrical covariance law and basis-rotation invariance of Q.
std::vector<CheckResult> check_cylindrical_covariance(const SuiteOptions& o) {
  std::vector<CheckResult> out;
  const int n_paths = o.quick ? 20000 : 100000;
  const TimeGrid grid(1.0, 64);

  std::vector<double> qdiag(10), qsheet(8);
  for (int k = 0; k < 10; ++k) qdiag[k] = 1.0 / (k + 1);
  for (int k = 0; k < 8; ++k) qsheet[k] = 1.0 / (k + 1);
  std::vector<std::pair<double, double>> cells;
  for (int k = 0; k < 8; ++k) {
    const int b = k % 4;
    cells.push_back({0.25 * b, 0.25 * (b + 1)});
  }
  struct Model {
    const char* name;
    cyl::Embedding emb;
  };
  const Model models[] = {{"diag", cyl::make_diagonal(qdiag)},
                          {"sheet", cyl::make_sheet(32, qsheet, cells)}};

  for (const auto& model : models) {
    const Eigen::MatrixXd Q = cyl::covariance_operator(model.emb);
    for (double Hval : {0.25, 0.75}) {
      const Hurst h(Hval);
      auto eng = rng::stream(o.seed, 920);
      std::normal_distribution<double> gauss;
      const int m = model.emb.dim_u();
      Eigen::VectorXd u(m), v(m);
      for (int i = 0; i < m; ++i) u(i) = gauss(eng);
      for (int i = 0; i < m; ++i) v(i) = gauss(eng);
      u.normalize();
      v.normalize();

      const cyl::CylFbm B{model.emb, h, grid, n_paths,
                          o.seed + (Hval < 0.5 ? 21 : 22)};
      const std::vector<std::pair<double, Eigen::VectorXd>> queries = {
          {0.5, u}, {1.0, v}, {0.25, u}, {0.75, v}};
      const Eigen::MatrixXd S = cyl::apply_many(B, queries);

      char name[96];
      const char* tag = Hval < 0.5 ? "H25" : "H75";
      const double r1 = u.dot(Q * v) * fbm::covariance(0.5, 1.0, h);
      std::snprintf(name, sizeof(name), "07_cyl_cov_%s_%s_a", model.name, tag);
      out.push_back(from_report(name, harness::mc_compare_cov(col(S, 0), col(S, 1), r1)));
      const double r2 = u.dot(Q * v) * fbm::covariance(0.25, 0.75, h);
      std::snprintf(name, sizeof(name), "07_cyl_cov_%s_%s_b", model.name, tag);
      out.push_back(from_report(name, harness::mc_compare_cov(col(S, 2), col(S, 3), r2)));
      const double r3 = u.dot(Q * u) * fbm::covariance(0.5, 0.25, h);
      std::snprintf(name, sizeof(name), "07_cyl_cov_%s_%s_c", model.name, tag);
      out.push_back(from_report(name, harness::mc_compare_cov(col(S, 0), col(S, 2), r3)));
    }

    // rotation of the X-basis leaves Q = i i* unchanged
    auto eng = rng::stream(o.seed, 921);
    std::normal_distribution<double> gauss;
    const int N = model.emb.truncation;
    Eigen::MatrixXd G(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) G(i, j) = gauss(eng);
    const Eigen::MatrixXd O = Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ();
    cyl::Embedding rotated = model.emb;
    rotated.coeff = model.emb.coeff * O;
    const double drift = (cyl::covariance_operator(rotated) - Q).norm() /
                         std::max(Q.norm(), 1e-300);
    out.push_back(from_tolerance(std::string("07_rotation_invariance_") + model.name,
                                 drift, 1e-12));
  }
  return out;
}

// 8. Covariance factorisation Q_Psi = Gamma Gamma* against Monte Carlo.
std::vector<CheckResult> check_integral_factorization(const SuiteOptions& o) {
  std::vector<CheckResult> out;
  const int n_paths = o.quick ? 20000 : 100000;
  const std::vector<double> lambda{1.0, 2.0, 4.0, 8.0};
  const std::vector<double> q{1.0, 0.8, 0.6, 0.4};
  const auto psi = stochint::make_diagonal_semigroup(lambda);
  const auto emb = cyl::make_diagonal(q);
  const TimeGrid grid(1.0, 64);

  for (double Hval : {0.25, 0.75}) {
    const Hurst h(Hval);
    const char* tag = Hval < 0.5 ? "H25" : "H75";
    const Eigen::MatrixXd Q = stochint::covariance_q_psi(psi, emb, h, 1.0, 384,
                                                         o.quick ? 256 : 384);
    const Eigen::MatrixXd S = stochint::simulate(psi, emb, h, grid, 1.0, n_paths,
                                                 o.seed + (Hval < 0.5 ? 31 : 32));
    int idx = 0;
    for (int a = 0; a < 4; ++a) {
      for (int b = a; b < 4; ++b) {
        const auto r = (a == b)
                           ? harness::mc_compare_variance(col(S, a), Q(a, a))
                           : harness::mc_compare_cov(col(S, a), col(S, b), Q(a, b));
        out.push_back(from_report(fmt_name("08_factorization", tag, idx++), r));
      }
    }
  }
  return out;
}

// 9. Heat-mode variance: lambda=0 closed form, brute-force oracle, MC.
std::vector<CheckResult> check_mode_variance(const SuiteOptions& o) {
  std::vector<CheckResult> out;
  for (double Hval : {0.25, 0.75}) {
    const Hurst h(Hval);
    const double ref = 0.49 * std::pow(0.6, 2.0 * Hval);
    const double got = cauchy::mode_variance_exact(0.0, 0.7, 0.6, h);
    out.push_back(from_tolerance(
        std::string("09_mode_var_lambda0_") + (Hval < 0.5 ? "H25" : "H75"),
        std::abs(got - ref) / ref, 1e-12));
  }

  const Hurst h(0.75);
  const double lam = 1.0, t = 1.0;
  const double quad = cauchy::mode_variance_exact(lam, 1.0, t, h, 2048);

  // independent 4096^2-cell brute-force double Riemann sum
  {
    const int n = 4096;
    const double hh = t / n;
    const double twoH = 1.5;
    std::vector<double> ex(n), wdist(n);
    for (int i = 0; i < n; ++i) ex[i] = std::exp(-lam * (t - (i + 0.5) * hh));
    for (int d = 1; d < n; ++d) wdist[d] = std::pow(d * hh, twoH - 2.0) * hh * hh;
    const double w0 = 2.0 * std::pow(hh, twoH) / (twoH * (twoH - 1.0));
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += ex[i] * ex[i] * w0;
    for (int d = 1; d < n; ++d) {
      double acc = 0.0;
      for (int i = 0; i + d < n; ++i) acc += ex[i] * ex[i + d];
      s += 2.0 * wdist[d] * acc;
    }
    const double brute = h.value() * (twoH - 1.0) * s;
    out.push_back(
        from_tolerance("09_mode_var_brute_H75", std::abs(quad - brute) / brute, 0.005));
  }

  // Monte Carlo via the mild-solution sampler
  {
    const int n_paths = o.quick ? 4000 : 10000;
    cauchy::SpectralModel m;
    m.lambda = {lam};
    m.q = {1.0};
    m.y0 = Eigen::VectorXd::Zero(1);
    const auto paths = cauchy::simulate_mild(m, h, TimeGrid(1.0, 64), n_paths,
                                             o.seed + 41, 8);
    const auto samples = col(paths.mode[0], 64);
    out.push_back(
        from_report("09_mode_var_mc_H75", harness::mc_compare_variance(samples, quad)));
  }
  return out;
}

// 10. Theorem-level threshold: existence criterion vs Hilbert-Schmidt test.
std::vector<CheckResult> check_existence_threshold(const SuiteOptions& o) {
  std::vector<CheckResult> out;
  struct Case {
    double H;
    int dim;
    bool exists;
  };
  const Case cases[] = {{0.3, 1, true}, {0.2, 1, false}, {0.6, 2, true}, {0.4, 2, false}};
  const int modes = o.quick ? 48 : 96;
  for (const auto& c : cases) {
    const Hurst h(c.H);
    const auto model = cauchy::SpectralModel::dirichlet_laplacian(
        c.dim, 512, [](int) { return 1.0; }, 0.0);
    const auto ex = cauchy::existence_criterion(model, h);

    const auto small = cauchy::SpectralModel::dirichlet_laplacian(
        c.dim, modes, [](int) { return 1.0; }, 0.0);
    const auto psi = stochint::make_diagonal_semigroup(small.lambda);
    const auto emb = cyl::make_diagonal(small.q);
    const auto hs = stochint::hs_test(psi, emb, h, 1.0, modes);

    const bool expect_ok =
        (ex.verdict == cyl::Verdict::genuine) == c.exists &&
        (hs.verdict == cyl::Verdict::genuine) == c.exists &&
        ex.verdict == hs.verdict;
    char name[64];
    std::snprintf(name, sizeof(name), "10_threshold_H%02d_dim%d",
                  static_cast<int>(c.H * 100), c.dim);
    out.push_back(from_flag(name, expect_ok, hs.exponent, ex.exponent));
  }
  return out;
}

// 11. Explicit integral bounds from the heat-equation estimates.
std::vector<CheckResult> check_paper_bounds(const SuiteOptions& o) {
  std::vector<CheckResult> out;
  const double lambdas[] = {1.0, 10.0, 100.0};
  {
    const Hurst h(0.75);
    int idx = 0;
    for (double lam : lambdas) {
      const auto r = cauchy::bound_check_high(lam, h, 1.0, o.quick ? 1024 : 2048);
      out.push_back(from_flag(fmt_name("11_bound_high", "H75", idx++), r.holds(),
                              r.value, r.bound));
    }
  }
  {
    const Hurst h(0.25);
    int idx = 0;
    for (double lam : lambdas) {
      const auto r = cauchy::bound_check_low(lam, h, 1.0, o.quick ? 384 : 512);
      out.push_back(from_flag(fmt_name("11_bound_low_horizon", "H25", idx), r.i_horizon <= r.b_horizon,
                              r.i_horizon, r.b_horizon));
      out.push_back(from_flag(fmt_name("11_bound_low_origin", "H25", idx), r.i_origin <= r.b_origin,
                              r.i_origin, r.b_origin));
      out.push_back(from_flag(fmt_name("11_bound_low_diff", "H25", idx), r.i_diff <= r.b_diff,
                              r.i_diff, r.b_diff));
      ++idx;
    }
  }
  return out;
}

// 12. Weak-solution identity residual under grid refinement.
std::vector<CheckResult> check_weak_solution_residual(const SuiteOptions& o) {
  std::vector<CheckResult> out;
  cauchy::SpectralModel m;
  m.lambda = {1.0, 4.0};
  m.q = {1.0, 0.7};
  m.y0 = Eigen::VectorXd::Zero(2);
  m.y0 << 1.0, 0.5;
  const TimeGrid grid(1.0, 64);
  const int refines[] = {2, 4, 8, 16};

  for (double Hval : {0.25, 0.75}) {
    const Hurst h(Hval);
    const char* tag = Hval < 0.5 ? "H25" : "H75";
    for (int mode = 0; mode < 2; ++mode) {
      std::vector<double> errs, hs;
      double at8 = 0.0;
      for (int rf : refines) {
        const auto paths = cauchy::simulate_mild(m, h, grid, 4, o.seed + 51, rf);
        const double e = cauchy::weak_solution_residual(m, paths, mode).maxCoeff();
        errs.push_back(e);
        hs.push_back(grid.step() / rf);
        if (rf == 8) at8 = e;
      }
      out.push_back(
          from_tolerance(fmt_name("12_residual_max", tag, mode), at8, 5e-3));
      const double rate = harness::convergence_rate(errs, hs);
      out.push_back(
          from_flag(fmt_name("12_residual_rate", tag, mode), rate > 0.0, rate, 0.0));
    }
  }
  return out;
}

std::vector<CheckResult> run_all(const SuiteOptions& o, std::ostream& os) {
  std::vector<CheckResult> all;
  auto add = [&](std::vector<CheckResult> v) {
    for (auto& c : v) all.push_back(std::move(c));
  };
  add(check_covariance_law(o));
  add(check_kernel_reconstruction(o));
  add(check_wiener_isometry(o));
  add(check_kstar_isometry(o));
  add(check_fractional_inversion(o));
  add(check_reflection_identity(o));
  add(check_cylindrical_covariance(o));
  add(check_integral_factorization(o));
  add(check_mode_variance(o));
  add(check_existence_threshold(o));
  add(check_paper_bounds(o));
  add(check_weak_solution_residual(o));

  std::sort(all.begin(), all.end(),
            [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
  for (const auto& c : all) os << c.line << "\n";
  return all;
}

} // namespace cylfbm::validation
