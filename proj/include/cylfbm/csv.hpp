#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cylfbm/types.hpp"

namespace cylfbm::csv {

// SampledFunction CSV: header "t,v_0,...,v_{m-1}", one row per node,
// >= 15 significant digits.
void write_sampled(std::ostream& os, const SampledFunction& f);
SampledFunction read_sampled(std::istream& is);

// Step function in the same layout; the value columns of row i give the piece
// on [t_i, t_{i+1}); the last row's values are ignored.
void write_simple(std::ostream& os, const SimpleFunction& f);
SimpleFunction read_simple(std::istream& is);

// Plain sample matrix with a generated header "sample_0,...".
void write_matrix(std::ostream& os, const Eigen::MatrixXd& m,
                  const std::string& col_prefix);

// key=value config files ('#' comments, blank lines ignored)
std::map<std::string, std::string> read_config(std::istream& is);
std::map<std::string, std::string> read_config_file(const std::string& path);

// Weight rules: "k^<p>" (power of the 1-based index), "list:a,b,c", or a
// constant number applied to every index.
struct WeightRule {
  std::vector<double> values;            // explicit list, if given
  std::optional<double> power;           // q_k = k^power
  std::optional<double> constant;        // q_k = constant
  double at(int k1) const;               // 1-based index
  std::optional<double> growth() const { // q_k ~ k^growth when known
    if (power) return power;
    if (constant) return 0.0;
    return std::nullopt;
  }
};

WeightRule parse_weight_rule(const std::string& spec);

} // namespace cylfbm::csv
