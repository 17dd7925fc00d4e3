// cylfbm: fractional Brownian motion kernels, Wiener/cylindrical integrals and
// the spectral stochastic heat equation, exposed as batch subcommands.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "cylfbm/cauchy.hpp"
#include "cylfbm/csv.hpp"
#include "cylfbm/cyl_process.hpp"
#include "cylfbm/fbm.hpp"
#include "cylfbm/fracops.hpp"
#include "cylfbm/harness.hpp"
#include "cylfbm/stochint.hpp"
#include "cylfbm/types.hpp"
#include "cylfbm/validation.hpp"
#include "cylfbm/wiener.hpp"

namespace {

using namespace cylfbm;

std::uint64_t default_seed() {
  if (const char* e = std::getenv("CYLFBM_SEED")) return std::strtoull(e, nullptr, 10);
  return 42;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::invalid_argument("cannot open output file: " + path);
  return os;
}

SampledFunction read_sampled_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open input file: " + path);
  return csv::read_sampled(is);
}

SimpleFunction read_simple_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open input file: " + path);
  return csv::read_simple(is);
}

Eigen::VectorXd parse_functional(const std::string& spec, int dim) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);
  if (!spec.empty() && spec[0] == 'e') {
    const int k = std::stoi(spec.substr(1));
    if (k < 1 || k > dim) throw std::invalid_argument("functional index out of range");
    u(k - 1) = 1.0;
    return u;
  }
  std::stringstream ss(spec);
  std::string tok;
  int i = 0;
  while (std::getline(ss, tok, ',')) {
    if (i >= dim) throw std::invalid_argument("functional has too many entries");
    u(i++) = std::stod(tok);
  }
  if (i != dim) throw std::invalid_argument("functional has too few entries");
  return u;
}

cyl::Embedding embedding_from_config(const std::map<std::string, std::string>& cfg) {
  const auto kind = cfg.count("kind") ? cfg.at("kind") : "diagonal";
  const int N = cfg.count("N") ? std::stoi(cfg.at("N")) : 8;
  const auto rule = csv::parse_weight_rule(cfg.count("weights") ? cfg.at("weights") : "1");
  std::vector<double> q(N);
  for (int k = 0; k < N; ++k) q[k] = rule.at(k + 1);
  std::optional<double> decl;
  if (auto g = rule.growth()) decl = -2.0 * *g;

  if (kind == "diagonal") return cyl::make_diagonal(q, decl);

  const int m = cfg.count("m") ? std::stoi(cfg.at("m")) : 4 * N;
  if (kind == "sheet") {
    const int blocks = cfg.count("blocks") ? std::stoi(cfg.at("blocks")) : 4;
    std::vector<std::pair<double, double>> cells;
    for (int k = 0; k < N; ++k) {
      const int b = k % blocks;
      cells.push_back({static_cast<double>(b) / blocks,
                       static_cast<double>(b + 1) / blocks});
    }
    return cyl::make_sheet(m, q, cells, decl);
  }
  if (kind == "weighted_basis") {
    const auto shape = cfg.count("tau_shape") ? cfg.at("tau_shape") : "const";
    auto tau = [rule, shape](int k, double x) {
      const double scale = rule.at(k);
      return shape == "ramp" ? scale * (0.5 + x) : scale;
    };
    return cyl::make_weighted_basis(m, N, tau, decl);
  }
  throw std::invalid_argument("unknown embedding kind: " + kind);
}

struct HeatArgs {
  double hurst = 0.75;
  int dim = 1;
  int modes = 64;
  double T = 1.0;
  int grid_n = 64;
  int paths = 1000;
  std::uint64_t seed = default_seed();
  std::string out;
  double lambda = 1.0;
};

void summary_line(std::ostream& os, const Eigen::VectorXd& samples, double exact_var) {
  const double mean = samples.mean();
  const double var = (samples.array() - mean).square().sum() / (samples.size() - 1);
  const double se = var * std::sqrt(2.0 / (samples.size() - 1));
  const double z = se > 0.0 ? (var - exact_var) / se : 0.0;
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "{\"mean\": %.10g, \"var\": %.10g, \"exact_var\": %.10g, \"z\": %.4g}",
                mean, var, exact_var, z);
  os << buf << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"fractional Brownian motion kernels, Wiener/cylindrical integrals and "
               "the spectral stochastic heat equation"};
  app.require_subcommand(1);
  std::uint64_t seed = default_seed();

  // ---- fbm sample ----
  auto* fbm_cmd = app.add_subcommand("fbm", "real-valued fBm utilities");
  fbm_cmd->require_subcommand(1);
  auto* fbm_sample = fbm_cmd->add_subcommand("sample", "sample exact fBm paths");
  double fs_h = 0.75, fs_T = 1.0;
  int fs_n = 64, fs_paths = 8;
  std::string fs_out;
  fbm_sample->add_option("--hurst", fs_h, "Hurst parameter")->required();
  fbm_sample->add_option("--T", fs_T, "horizon");
  fbm_sample->add_option("--grid-n", fs_n, "number of grid steps");
  fbm_sample->add_option("--paths", fs_paths, "number of paths");
  fbm_sample->add_option("--seed", seed, "RNG seed (CYLFBM_SEED fallback)");
  fbm_sample->add_option("--out", fs_out, "output CSV")->required();

  // ---- frac ----
  auto* frac = app.add_subcommand("frac", "fractional operators on sampled functions");
  frac->require_subcommand(1);
  struct FracArgs {
    double alpha = 0.3, hurst = 0.75;
    int quad = 2048;
    std::string in, out;
  } fa;
  auto* f_int = frac->add_subcommand("integral", "right-sided fractional integral");
  f_int->add_option("--alpha", fa.alpha)->required();
  f_int->add_option("--in", fa.in)->required();
  f_int->add_option("--out", fa.out)->required();
  auto* f_der = frac->add_subcommand("derivative", "right-sided fractional derivative");
  f_der->add_option("--alpha", fa.alpha)->required();
  f_der->add_option("--in", fa.in)->required();
  f_der->add_option("--out", fa.out)->required();
  auto* f_kstar = frac->add_subcommand("kstar", "K* transform");
  f_kstar->add_option("--hurst", fa.hurst)->required();
  f_kstar->add_option("--quad", fa.quad);
  f_kstar->add_option("--in", fa.in)->required();
  f_kstar->add_option("--out", fa.out)->required();

  // ---- wiener ----
  auto* wie = app.add_subcommand("wiener", "Wiener integral of a step function");
  std::string w_integrand, w_out;
  int w_paths = 10000, w_grid_n = 0;
  double w_h = 0.75;
  wie->add_option("--integrand", w_integrand, "step-function CSV")->required();
  wie->add_option("--paths", w_paths);
  wie->add_option("--hurst", w_h)->required();
  wie->add_option("--seed", seed);
  wie->add_option("--grid-n", w_grid_n, "path grid steps (default: 64 per unit time)");
  wie->add_option("--out", w_out, "samples CSV")->required();

  // ---- cyl ----
  auto* cylc = app.add_subcommand("cyl", "cylindrical fBm");
  cylc->require_subcommand(1);
  std::string c_config, c_u = "e1", c_out;
  double c_t = 1.0, c_T = 1.0;
  int c_grid_n = 64, c_paths = 10000, c_N = 0;
  auto* c_apply = cylc->add_subcommand("apply", "sample B(t)u*");
  c_apply->add_option("--config", c_config)->required();
  c_apply->add_option("--t", c_t)->required();
  c_apply->add_option("--T", c_T);
  c_apply->add_option("--grid-n", c_grid_n);
  c_apply->add_option("--u", c_u, "functional: 'e<k>' or comma list");
  c_apply->add_option("--paths", c_paths);
  c_apply->add_option("--seed", seed);
  c_apply->add_option("--out", c_out)->required();
  auto* c_gen = cylc->add_subcommand("genuine", "Hilbert-Schmidt verdict");
  c_gen->add_option("--config", c_config)->required();
  c_gen->add_option("--N", c_N, "override truncation for the partial sums");

  // ---- integrate ----
  auto* integ = app.add_subcommand("integrate", "stochastic integral of Psi against B");
  std::string i_spec, i_prefix = "integral";
  double i_h = 0.75, i_upto = 0.0;
  int i_paths = 10000;
  integ->add_option("--psi-spec", i_spec, "integrand config")->required();
  integ->add_option("--hurst", i_h)->required();
  integ->add_option("--upto", i_upto, "integrate over [0, upto] (default: horizon)");
  integ->add_option("--paths", i_paths);
  integ->add_option("--seed", seed);
  integ->add_option("--out", i_prefix, "output prefix");

  // ---- heat ----
  auto* heat = app.add_subcommand("heat", "spectral stochastic heat equation");
  heat->require_subcommand(1);
  HeatArgs ha;
  auto* h_check = heat->add_subcommand("check", "weak-solution existence criterion");
  h_check->add_option("--hurst", ha.hurst)->required();
  h_check->add_option("--dim", ha.dim);
  h_check->add_option("--modes", ha.modes);
  auto* h_sim = heat->add_subcommand("simulate", "mild-solution mode paths");
  h_sim->add_option("--hurst", ha.hurst)->required();
  h_sim->add_option("--dim", ha.dim);
  h_sim->add_option("--modes", ha.modes);
  h_sim->add_option("--T", ha.T);
  h_sim->add_option("--grid-n", ha.grid_n);
  h_sim->add_option("--paths", ha.paths);
  h_sim->add_option("--seed", seed);
  h_sim->add_option("--out", ha.out)->required();
  auto* h_bounds = heat->add_subcommand("bounds", "explicit integral bounds");
  h_bounds->add_option("--hurst", ha.hurst)->required();
  h_bounds->add_option("--lambda", ha.lambda);
  h_bounds->add_option("--T", ha.T);

  // ---- validate ----
  auto* val = app.add_subcommand("validate", "run the validation suite");
  val->require_subcommand(1);
  auto* val_all = val->add_subcommand("all", "all checks");
  bool v_quick = false, v_full = false;
  val_all->add_flag("--quick", v_quick, "reduced suite");
  val_all->add_flag("--full", v_full, "complete suite (default)");
  val_all->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*fbm_sample) {
    const auto ps = fbm::sample_paths(TimeGrid(fs_T, fs_n), Hurst(fs_h), fs_paths, seed);
    auto os = open_out(fs_out);
    fbm::write_paths_csv(os, ps);
    return 0;
  }

  if (*f_int || *f_der || *f_kstar) {
    const auto f = read_sampled_file(fa.in);
    SampledFunction g = *f_int   ? fracops::frac_integral(f, fa.alpha)
                        : *f_der ? fracops::frac_derivative(f, fa.alpha)
                                 : fracops::kstar(f, Hurst(fa.hurst), fa.quad);
    auto os = open_out(fa.out);
    csv::write_sampled(os, g);
    return 0;
  }

  if (*wie) {
    const auto f = read_simple_file(w_integrand);
    const Hurst h(w_h);
    const int n = w_grid_n > 0 ? w_grid_n
                               : std::max(16, static_cast<int>(64 * f.horizon()));
    const auto ps = fbm::sample_paths(TimeGrid(f.horizon(), n), h, w_paths, seed);
    const auto res = wiener::integrate_simple_result(f, ps, h);
    auto os = open_out(w_out);
    csv::write_matrix(os, res.samples, "coord_");
    summary_line(std::cout, res.samples.col(0), res.exact_second_moment);
    return 0;
  }

  if (*c_apply || *c_gen) {
    const auto cfg = csv::read_config_file(c_config);
    auto emb = embedding_from_config(cfg);
    if (cfg.count("seed") && !c_apply->count("--seed") && !std::getenv("CYLFBM_SEED"))
      seed = std::stoull(cfg.at("seed"));
    if (*c_gen) {
      const int N = c_N > 0 ? std::min(c_N, emb.truncation) : emb.truncation;
      const auto rep = cyl::is_genuine(emb, N);
      std::printf("partial_sum_N=%.10g exponent=%.6g (%s) verdict=%s\n",
                  rep.partial_sums.back(), rep.exponent,
                  rep.exponent_declared ? "declared" : "fitted",
                  cyl::to_string(rep.verdict).c_str());
      return 0;
    }
    const Hurst h(cfg.count("hurst") ? std::stod(cfg.at("hurst")) : 0.75);
    const cyl::CylFbm B{emb, h, TimeGrid(c_T, c_grid_n), c_paths, seed};
    const auto u = parse_functional(c_u, emb.dim_u());
    const Eigen::MatrixXd s = cyl::apply_many(B, {{c_t, u}});
    auto os = open_out(c_out);
    csv::write_matrix(os, s, "sample_");
    const Eigen::MatrixXd Q = cyl::covariance_operator(emb);
    const double exact = u.dot(Q * u) * fbm::covariance(c_t, c_t, h);
    summary_line(std::cout, s.col(0), exact);
    return 0;
  }

  if (*integ) {
    const auto cfg = csv::read_config_file(i_spec);
    const int N = cfg.count("N") ? std::stoi(cfg.at("N")) : 4;
    const double T = cfg.count("T") ? std::stod(cfg.at("T")) : 1.0;
    const int grid_n = cfg.count("grid_n") ? std::stoi(cfg.at("grid_n")) : 64;
    const auto lam_rule =
        csv::parse_weight_rule(cfg.count("lambda") ? cfg.at("lambda") : "k^2.0");
    const auto q_rule = csv::parse_weight_rule(cfg.count("q") ? cfg.at("q") : "1");
    std::vector<double> lam(N), q(N);
    for (int k = 0; k < N; ++k) {
      lam[k] = lam_rule.at(k + 1);
      q[k] = q_rule.at(k + 1);
    }
    const auto psi = stochint::make_diagonal_semigroup(lam);
    const auto emb = cyl::make_diagonal(q);
    const Hurst h(i_h);
    const double upto = i_upto > 0.0 ? i_upto : T;
    const TimeGrid grid(T, grid_n);

    const auto samples = stochint::simulate(psi, emb, h, grid, upto, i_paths, seed);
    const auto Q = stochint::covariance_q_psi(psi, emb, h, upto);
    {
      auto os = open_out(i_prefix + "_samples.csv");
      csv::write_matrix(os, samples, "coord_");
    }
    {
      auto os = open_out(i_prefix + "_covariance.csv");
      csv::write_matrix(os, Q, "q_");
    }
    const auto hs = stochint::hs_test(psi, emb, h, T, N);
    std::printf("hs_partial_sum=%.10g exponent=%.6g verdict=%s\n",
                hs.partial_sums.back(), hs.exponent,
                hs.verdict == cyl::Verdict::genuine ? "integrable" : "not-integrable");
    return 0;
  }

  if (*h_check) {
    const auto model = cauchy::SpectralModel::dirichlet_laplacian(
        ha.dim, ha.modes, [](int) { return 1.0; }, 0.0);
    const auto rep = cauchy::existence_criterion(model, Hurst(ha.hurst));
    const char* verdict = rep.verdict == cyl::Verdict::genuine ? "exists"
                          : rep.verdict == cyl::Verdict::cylindrical_only
                              ? "diverges"
                              : "inconclusive";
    std::printf("criterion_sum_N=%.10g exponent=%.6g verdict=%s\n",
                rep.partial_sums.back(), rep.exponent, verdict);
    return 0;
  }

  if (*h_sim) {
    const auto model = cauchy::SpectralModel::dirichlet_laplacian(
        ha.dim, ha.modes, [](int) { return 1.0; }, 0.0);
    const auto paths =
        cauchy::simulate_mild(model, Hurst(ha.hurst), TimeGrid(ha.T, ha.grid_n),
                              ha.paths, seed);
    auto os = open_out(ha.out);
    os << "t";
    for (int k = 0; k < model.truncation(); ++k)
      for (int p = 0; p < ha.paths; ++p) os << ",mode_" << k << "_path_" << p;
    os << "\n";
    char buf[40];
    for (int j = 0; j <= ha.grid_n; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", paths.grid.node(j));
      os << buf;
      for (int k = 0; k < model.truncation(); ++k)
        for (int p = 0; p < ha.paths; ++p) {
          std::snprintf(buf, sizeof(buf), "%.17g", paths.mode[k](p, j));
          os << ',' << buf;
        }
      os << "\n";
    }
    return 0;
  }

  if (*h_bounds) {
    const Hurst h(ha.hurst);
    if (h.high()) {
      const auto r = cauchy::bound_check_high(ha.lambda, h, ha.T);
      std::printf("bound_high value=%.10g bound=%.10g slack=%.4g holds=%s\n", r.value,
                  r.bound, r.slack(), r.holds() ? "yes" : "no");
    } else {
      const auto r = cauchy::bound_check_low(ha.lambda, h, ha.T);
      std::printf("bound_low_horizon value=%.10g bound=%.10g holds=%s\n", r.i_horizon,
                  r.b_horizon, r.i_horizon <= r.b_horizon ? "yes" : "no");
      std::printf("bound_low_origin value=%.10g bound=%.10g holds=%s\n", r.i_origin,
                  r.b_origin, r.i_origin <= r.b_origin ? "yes" : "no");
      std::printf("bound_low_diff value=%.10g bound=%.10g c2=%.6g holds=%s\n", r.i_diff,
                  r.b_diff, r.c2, r.i_diff <= r.b_diff ? "yes" : "no");
      std::printf("scaled_total=%.10g\n", r.scaled_total);
    }
    return 0;
  }

  if (*val_all) {
    validation::SuiteOptions opt;
    opt.quick = v_quick && !v_full;
    opt.seed = seed;
    const auto results = validation::run_all(opt, std::cout);
    int failures = 0;
    for (const auto& r : results)
      if (!r.pass) ++failures;
    std::fprintf(stderr, "%zu checks, %d failures\n", results.size(), failures);
    return failures == 0 ? 0 : 1;
  }

  return 2;
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ParseError&) {
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
