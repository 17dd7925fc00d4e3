#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const char* cli = std::getenv("CYLFBM_CLI");
  REQUIRE_MESSAGE(cli != nullptr, "CYLFBM_CLI must point at the binary");
  const std::string cmd = std::string(cli) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string tmp_path(const std::string& name) {
  return std::string("/tmp/cylfbm_test_") + name;
}

} // namespace

TEST_CASE("heat check prints the threshold verdicts") {
  const auto a = run_cli("heat check --hurst 0.3 --dim 1 --modes 512");
  CHECK(a.exit_code == 0);
  CHECK(a.out.find("verdict=exists") != std::string::npos);

  const auto b = run_cli("heat check --hurst 0.2 --dim 1 --modes 512");
  CHECK(b.exit_code == 0);
  CHECK(b.out.find("verdict=diverges") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("heat check --dim 1").exit_code == 2);       // missing --hurst
  CHECK(run_cli("heat check --hurst 0.3 --bogus 1").exit_code == 2);
  CHECK(run_cli("nonsense").exit_code == 2);
  CHECK(run_cli("fbm sample --hurst 2.0 --out /tmp/x.csv").exit_code == 2); // domain error
}

TEST_CASE("fbm sample is deterministic for a fixed seed") {
  const auto out1 = tmp_path("paths1.csv"), out2 = tmp_path("paths2.csv"),
             out3 = tmp_path("paths3.csv");
  CHECK(run_cli("fbm sample --hurst 0.75 --T 1 --grid-n 16 --paths 3 --seed 5 --out " +
                out1)
            .exit_code == 0);
  CHECK(run_cli("fbm sample --hurst 0.75 --T 1 --grid-n 16 --paths 3 --seed 5 --out " +
                out2)
            .exit_code == 0);
  CHECK(run_cli("fbm sample --hurst 0.75 --T 1 --grid-n 16 --paths 3 --seed 6 --out " +
                out3)
            .exit_code == 0);
  const auto a = slurp(out1), b = slurp(out2), c = slurp(out3);
  CHECK(!a.empty());
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a.rfind("t,path_0,path_1,path_2", 0) == 0);
}

TEST_CASE("CYLFBM_SEED env is the fallback and flags win") {
  const auto out1 = tmp_path("env1.csv"), out2 = tmp_path("env2.csv");
  const char* cli = std::getenv("CYLFBM_CLI");
  REQUIRE(cli != nullptr);
  const std::string base =
      std::string("CYLFBM_SEED=9 ") + cli + " fbm sample --hurst 0.75 --grid-n 8 --paths 1";
  CHECK(std::system((base + " --out " + out1 + " >/dev/null 2>&1").c_str()) == 0);
  CHECK(std::system((base + " --seed 9 --out " + out2 + " >/dev/null 2>&1").c_str()) == 0);
  CHECK(slurp(out1) == slurp(out2));
}

TEST_CASE("frac roundtrip through CSV files") {
  const auto in = tmp_path("f.csv"), out = tmp_path("If.csv");
  {
    std::ofstream os(in);
    os << "t,v_0\n";
    for (int j = 0; j <= 32; ++j) {
      const double t = j / 32.0;
      os << t << "," << 3.0 << "\n";
    }
  }
  CHECK(run_cli("frac integral --alpha 0.4 --in " + in + " --out " + out).exit_code == 0);
  const auto text = slurp(out);
  CHECK(text.rfind("t,v_0", 0) == 0);
  // first node value: 3 * 1^0.4 / Gamma(1.4)
  std::stringstream ss(text);
  std::string line;
  std::getline(ss, line);
  std::getline(ss, line);
  const double v = std::stod(line.substr(line.find(',') + 1));
  CHECK(v == doctest::Approx(3.0 / std::tgamma(1.4)).epsilon(1e-6));
}

TEST_CASE("wiener verb produces samples and a summary") {
  const auto in = tmp_path("step.csv"), out = tmp_path("samples.csv");
  {
    std::ofstream os(in);
    os << "t,v_0\n0,1\n0.5,-1\n1,0\n";
  }
  const auto r = run_cli("wiener --integrand " + in +
                         " --paths 2000 --hurst 0.75 --seed 3 --grid-n 32 --out " + out);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"exact_var\"") != std::string::npos);
  CHECK(slurp(out).rfind("coord_0", 0) == 0);
}

TEST_CASE("cyl genuine reads the embedding config") {
  const auto cfg = tmp_path("emb.cfg");
  {
    std::ofstream os(cfg);
    os << "kind=diagonal\nweights=k^-1.0\nN=64\n";
  }
  const auto r = run_cli("cyl genuine --config " + cfg);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("verdict=genuine") != std::string::npos);

  {
    std::ofstream os(cfg);
    os << "kind=diagonal\nweights=1\nN=64\n";
  }
  const auto d = run_cli("cyl genuine --config " + cfg);
  CHECK(d.exit_code == 0);
  CHECK(d.out.find("verdict=cylindrical-only") != std::string::npos);
}

TEST_CASE("heat bounds reports hold in both regimes") {
  const auto hi = run_cli("heat bounds --hurst 0.75 --lambda 10");
  CHECK(hi.exit_code == 0);
  CHECK(hi.out.find("holds=yes") != std::string::npos);
  const auto lo = run_cli("heat bounds --hurst 0.25 --lambda 10");
  CHECK(lo.exit_code == 0);
  CHECK(lo.out.find("bound_low_diff") != std::string::npos);
  CHECK(lo.out.find("holds=no") == std::string::npos);
}

TEST_CASE("heat simulate writes the mode-path CSV layout") {
  const auto out = tmp_path("modes.csv");
  const auto r = run_cli(
      "heat simulate --hurst 0.75 --dim 1 --modes 2 --T 1 --grid-n 8 --paths 2 --seed 4 "
      "--out " +
      out);
  CHECK(r.exit_code == 0);
  const auto text = slurp(out);
  CHECK(text.rfind("t,mode_0_path_0,mode_0_path_1,mode_1_path_0,mode_1_path_1", 0) == 0);
}

TEST_CASE("integrate verb emits samples, covariance and the hs report") {
  const auto cfg = tmp_path("psi.cfg");
  {
    std::ofstream os(cfg);
    os << "lambda=k^2.0\nq=1\nN=3\nT=1\ngrid_n=16\n";
  }
  const auto prefix = tmp_path("int");
  const auto r = run_cli("integrate --psi-spec " + cfg +
                         " --hurst 0.75 --paths 500 --seed 2 --out " + prefix);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("hs_partial_sum=") != std::string::npos);
  CHECK(slurp(prefix + "_samples.csv").rfind("coord_0", 0) == 0);
  CHECK(slurp(prefix + "_covariance.csv").rfind("q_0", 0) == 0);
}
