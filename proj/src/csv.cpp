#include "cylfbm/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cylfbm::csv {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

struct Table {
  std::vector<double> t;
  Eigen::MatrixXd values;
};

Table read_table(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("csv: empty input");
  const auto header = split(line, ',');
  if (header.size() < 2 || header[0] != "t")
    throw std::invalid_argument("csv: expected header starting with 't'");
  const int m = static_cast<int>(header.size()) - 1;

  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (static_cast<int>(cells.size()) != m + 1)
      throw std::invalid_argument("csv: ragged row");
    std::vector<double> row(m + 1);
    for (std::size_t i = 0; i < cells.size(); ++i) row[i] = std::stod(cells[i]);
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw std::invalid_argument("csv: need at least two rows");

  Table tb;
  tb.t.resize(rows.size());
  tb.values.resize(static_cast<Eigen::Index>(rows.size()), m);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    tb.t[r] = rows[r][0];
    for (int c = 0; c < m; ++c) tb.values(static_cast<Eigen::Index>(r), c) = rows[r][c + 1];
  }
  return tb;
}

void write_table(std::ostream& os, const std::vector<double>& t,
                 const Eigen::MatrixXd& values) {
  os << "t";
  for (Eigen::Index c = 0; c < values.cols(); ++c) os << ",v_" << c;
  os << "\n";
  for (std::size_t r = 0; r < t.size(); ++r) {
    os << fmt(t[r]);
    for (Eigen::Index c = 0; c < values.cols(); ++c)
      os << ',' << fmt(values(static_cast<Eigen::Index>(r), c));
    os << "\n";
  }
}

} // namespace

void write_sampled(std::ostream& os, const SampledFunction& f) {
  write_table(os, f.grid.nodes(), f.values);
}

SampledFunction read_sampled(std::istream& is) {
  const auto tb = read_table(is);
  const int n = static_cast<int>(tb.t.size()) - 1;
  const double T = tb.t.back();
  if (std::abs(tb.t.front()) > 1e-12) throw std::invalid_argument("csv: grid must start at 0");
  TimeGrid grid(T, n);
  for (int j = 0; j <= n; ++j)
    if (std::abs(tb.t[j] - grid.node(j)) > 1e-9 * std::max(1.0, T))
      throw std::invalid_argument("csv: grid must be uniform");
  return {grid, tb.values};
}

void write_simple(std::ostream& os, const SimpleFunction& f) {
  Eigen::MatrixXd values(f.pieces.rows() + 1, f.pieces.cols());
  values.topRows(f.pieces.rows()) = f.pieces;
  values.row(f.pieces.rows()).setZero();
  write_table(os, f.breakpoints, values);
}

SimpleFunction read_simple(std::istream& is) {
  const auto tb = read_table(is);
  const Eigen::Index n = static_cast<Eigen::Index>(tb.t.size()) - 1;
  return {tb.t, tb.values.topRows(n)};
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m,
                  const std::string& col_prefix) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    os << (c ? "," : "") << col_prefix << c;
  os << "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << (c ? "," : "") << fmt(m(r, c));
    os << "\n";
  }
}

std::map<std::string, std::string> read_config(std::istream& is) {
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!key.empty()) out[key] = val;
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file: " + path);
  return read_config(is);
}

double WeightRule::at(int k1) const {
  if (!values.empty()) {
    if (k1 < 1 || k1 > static_cast<int>(values.size()))
      throw std::out_of_range("weight rule: index beyond explicit list");
    return values[k1 - 1];
  }
  if (power) return std::pow(static_cast<double>(k1), *power);
  if (constant) return *constant;
  throw std::logic_error("weight rule: empty");
}

WeightRule parse_weight_rule(const std::string& spec) {
  WeightRule r;
  if (spec.rfind("list:", 0) == 0) {
    for (const auto& tok : split(spec.substr(5), ','))
      r.values.push_back(std::stod(tok));
    if (r.values.empty()) throw std::invalid_argument("weight rule: empty list");
    return r;
  }
  if (spec.rfind("k^", 0) == 0) {
    r.power = std::stod(spec.substr(2));
    return r;
  }
  r.constant = std::stod(spec);
  return r;
}

} // namespace cylfbm::csv
