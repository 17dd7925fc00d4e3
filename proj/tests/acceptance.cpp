// Acceptance suite: runs every validation criterion at full size and prints
// one CHECK line per sub-check, plus the CLI determinism criterion.

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "cylfbm/validation.hpp"

#include <iostream>

namespace {

std::string capture(const std::string& cmd, int& exit_code) {
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    exit_code = -1;
    return {};
  }
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  exit_code = WEXITSTATUS(pclose(pipe));
  return out;
}

} // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  cylfbm::validation::SuiteOptions opt;
  opt.quick = std::getenv("CYLFBM_ACCEPT_QUICK") != nullptr;

  auto results = cylfbm::validation::run_all(opt, std::cout);

  // criterion: byte-identical reports from two quick runs of the CLI
  {
    bool pass = false;
    double len = 0.0;
    if (const char* cli = std::getenv("CYLFBM_CLI")) {
      const std::string cmd =
          std::string(cli) + " validate all --quick --seed 7 2>/dev/null";
      int code1 = 0, code2 = 0;
      const std::string a = capture(cmd, code1);
      const std::string b = capture(cmd, code2);
      pass = !a.empty() && a == b && code1 == code2;
      len = static_cast<double>(a.size());
    } else {
      std::fprintf(stderr, "CYLFBM_CLI not set; determinism criterion cannot run\n");
    }
    char line[160];
    std::snprintf(line, sizeof(line),
                  "CHECK 13_determinism_quick_rerun estimate=%.10g ref=%.10g z=0 "
                  "verdict=%s",
                  len, len, pass ? "pass" : "fail");
    std::cout << line << "\n";
    results.push_back({"13_determinism_quick_rerun", pass, line});
  }

  int failures = 0;
  for (const auto& r : results)
    if (!r.pass) ++failures;

  const auto dt = std::chrono::duration_cast<std::chrono::seconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  std::fprintf(stderr, "acceptance: %zu checks, %d failures, %llds\n", results.size(),
               failures, static_cast<long long>(dt));
  return failures == 0 ? 0 : 1;
}
