#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cylfbm::validation {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string line; // machine-readable CHECK line
};

struct SuiteOptions {
  bool quick = false;
  std::uint64_t seed = 20240915;
};

std::vector<CheckResult> check_covariance_law(const SuiteOptions& o);
std::vector<CheckResult> check_kernel_reconstruction(const SuiteOptions& o);
std::vector<CheckResult> check_wiener_isometry(const SuiteOptions& o);
std::vector<CheckResult> check_kstar_isometry(const SuiteOptions& o);
std::vector<CheckResult> check_fractional_inversion(const SuiteOptions& o);
std::vector<CheckResult> check_reflection_identity(const SuiteOptions& o);
std::vector<CheckResult> check_cylindrical_covariance(const SuiteOptions& o);
std::vector<CheckResult> check_integral_factorization(const SuiteOptions& o);
std::vector<CheckResult> check_mode_variance(const SuiteOptions& o);
std::vector<CheckResult> check_existence_threshold(const SuiteOptions& o);
std::vector<CheckResult> check_paper_bounds(const SuiteOptions& o);
std::vector<CheckResult> check_weak_solution_residual(const SuiteOptions& o);

// Runs checks 1-12, prints one line per sub-check sorted by name, returns all
// results. Prints nothing except the CHECK lines (stable bytes for a fixed
// seed and mode).
std::vector<CheckResult> run_all(const SuiteOptions& o, std::ostream& os);

} // namespace cylfbm::validation
