#include <doctest.h>

#include <sstream>

#include "cylfbm/csv.hpp"
#include "cylfbm/types.hpp"

using namespace cylfbm;

TEST_CASE("sampled function CSV round trip") {
  TimeGrid grid(2.0, 8);
  Eigen::MatrixXd v(9, 2);
  for (int j = 0; j <= 8; ++j) {
    v(j, 0) = std::sin(grid.node(j));
    v(j, 1) = grid.node(j) * grid.node(j) / 3.0;
  }
  const SampledFunction f{grid, v};
  std::stringstream ss;
  csv::write_sampled(ss, f);
  const auto g = csv::read_sampled(ss);
  CHECK(g.grid.steps() == 8);
  CHECK(g.grid.horizon() == doctest::Approx(2.0));
  CHECK((g.values - f.values).norm() == doctest::Approx(0.0));
}

TEST_CASE("simple function CSV round trip") {
  Eigen::MatrixXd p(3, 1);
  p << 1.0, -0.5, 2.0;
  const SimpleFunction f{{0.0, 0.25, 0.5, 1.0}, p};
  std::stringstream ss;
  csv::write_simple(ss, f);
  const auto g = csv::read_simple(ss);
  CHECK(g.breakpoints == f.breakpoints);
  CHECK((g.pieces - f.pieces).norm() == doctest::Approx(0.0));
}

TEST_CASE("csv rejects malformed input") {
  std::stringstream bad1("x,v_0\n0,1\n1,2\n");
  CHECK_THROWS(csv::read_sampled(bad1));
  std::stringstream bad2("t,v_0\n0,1\n0.5,2\n0.8,3\n"); // non-uniform
  CHECK_THROWS(csv::read_sampled(bad2));
}

TEST_CASE("config parser round trips key-value pairs") {
  std::stringstream ss("# embedding\nkind = diagonal\nweights=k^-1.0\nN=16\n\nhurst=0.75\n");
  const auto cfg = csv::read_config(ss);
  CHECK(cfg.at("kind") == "diagonal");
  CHECK(cfg.at("weights") == "k^-1.0");
  CHECK(cfg.at("N") == "16");
  CHECK(cfg.at("hurst") == "0.75");
}

TEST_CASE("weight rules") {
  const auto pw = csv::parse_weight_rule("k^-0.5");
  CHECK(pw.at(4) == doctest::Approx(0.5));
  CHECK(pw.growth().value() == doctest::Approx(-0.5));

  const auto ls = csv::parse_weight_rule("list:1.5,2.5,3.5");
  CHECK(ls.at(2) == doctest::Approx(2.5));
  CHECK(!ls.growth());
  CHECK_THROWS(ls.at(4));

  const auto c = csv::parse_weight_rule("0.25");
  CHECK(c.at(17) == doctest::Approx(0.25));
  CHECK(c.growth().value() == doctest::Approx(0.0));
}

TEST_CASE("simple function validation") {
  Eigen::MatrixXd p(2, 1);
  p << 1.0, 2.0;
  CHECK_THROWS(SimpleFunction({0.5, 1.0, 2.0}, p));  // must start at 0
  CHECK_THROWS(SimpleFunction({0.0, 1.0, 0.5}, p));  // must increase
}
