#include <doctest.h>

#include <cmath>

#include "cylfbm/fbm.hpp"
#include "cylfbm/fracops.hpp"
#include "cylfbm/harness.hpp"
#include "cylfbm/types.hpp"
#include "cylfbm/wiener.hpp"

using namespace cylfbm;

namespace {

std::vector<double> col(const Eigen::MatrixXd& m, int c) {
  return {m.col(c).data(), m.col(c).data() + m.rows()};
}

} // namespace

TEST_CASE("constant integrand telescopes to x b(T)") {
  const TimeGrid grid(1.0, 32);
  const Hurst h(0.75);
  const auto ps = fbm::sample_paths(grid, h, 64, 4);
  Eigen::MatrixXd x(1, 2);
  x << 2.0, -0.5;
  const SimpleFunction f({0.0, 1.0}, x);
  const auto s = wiener::integrate_simple(f, ps);
  for (int p = 0; p < 64; ++p) {
    CHECK(s(p, 0) == doctest::Approx(2.0 * ps.paths(p, 32)).epsilon(1e-12));
    CHECK(s(p, 1) == doctest::Approx(-0.5 * ps.paths(p, 32)).epsilon(1e-12));
  }
}

TEST_CASE("zero pieces integrate to zero") {
  const TimeGrid grid(1.0, 16);
  const auto ps = fbm::sample_paths(grid, Hurst(0.25), 8, 1);
  const SimpleFunction f({0.0, 0.5, 1.0}, Eigen::MatrixXd::Zero(2, 1));
  CHECK(wiener::integrate_simple(f, ps).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("breakpoints must lie on the path grid") {
  const TimeGrid grid(1.0, 16);
  const auto ps = fbm::sample_paths(grid, Hurst(0.25), 4, 1);
  const SimpleFunction f({0.0, 0.33, 1.0}, Eigen::MatrixXd::Ones(2, 1));
  CHECK_THROWS_AS((void)wiener::integrate_simple(f, ps), std::domain_error);
}

TEST_CASE("second moment of the unit indicator is T^{2H}") {
  for (double H : {0.25, 0.75}) {
    const Hurst h(H);
    const SimpleFunction f({0.0, 2.0}, Eigen::MatrixXd::Constant(1, 1, 1.0));
    CHECK(wiener::second_moment_exact(f, h) ==
          doctest::Approx(std::pow(2.0, 2.0 * H)).epsilon(1e-13));
    const SimpleFunction z({0.0, 2.0}, Eigen::MatrixXd::Zero(1, 1));
    CHECK(wiener::second_moment_exact(z, h) == doctest::Approx(0.0));
  }
}

TEST_CASE("two-piece variance example against the exact double sum") {
  // f = 1_{[0,1)} - 1_{[1,2)}, H = 0.75, T = 2
  const Hurst h(0.75);
  Eigen::MatrixXd p(2, 1);
  p << 1.0, -1.0;
  const SimpleFunction f({0.0, 1.0, 2.0}, p);
  const double exact = wiener::second_moment_exact(f, h);
  // independent oracle: Var = Var(2b(1) - b(2)) = 4R(1,1) - 4R(1,2) + R(2,2)
  const double byR = 4.0 * fbm::covariance(1, 1, h) - 4.0 * fbm::covariance(1, 2, h) +
                     fbm::covariance(2, 2, h);
  CHECK(exact == doctest::Approx(byR).epsilon(1e-12));

  const TimeGrid grid(2.0, 64);
  const auto ps = fbm::sample_paths(grid, h, 30000, 9);
  const auto s = wiener::integrate_simple(f, ps);
  CHECK(harness::mc_compare_variance(col(s, 0), exact).pass);
}

TEST_CASE("pathwise linearity of the step-sum integral") {
  const TimeGrid grid(1.0, 32);
  const auto ps = fbm::sample_paths(grid, Hurst(0.3), 32, 6);
  Eigen::MatrixXd pf(2, 1), pg(2, 1);
  pf << 1.0, 2.0;
  pg << -0.5, 0.25;
  const SimpleFunction f({0.0, 0.5, 1.0}, pf), g({0.0, 0.5, 1.0}, pg);
  const SimpleFunction comb({0.0, 0.5, 1.0}, 2.0 * pf + 3.0 * pg);
  const Eigen::MatrixXd lhs = wiener::integrate_simple(comb, ps);
  const Eigen::MatrixXd rhs =
      2.0 * wiener::integrate_simple(f, ps) + 3.0 * wiener::integrate_simple(g, ps);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("sample mean is compatible with zero") {
  const TimeGrid grid(1.0, 32);
  const Hurst h(0.25);
  const auto ps = fbm::sample_paths(grid, h, 20000, 12);
  Eigen::MatrixXd p(2, 1);
  p << 1.0, 0.7;
  const SimpleFunction f({0.0, 0.5, 1.0}, p);
  const auto s = wiener::integrate_simple(f, ps);
  CHECK(harness::mc_compare(col(s, 0), 0.0).pass);
}

TEST_CASE("K*-route simulation: zero integrand gives zero") {
  const TimeGrid grid(1.0, 16);
  const auto z = sample_scalar(grid, [](double) { return 0.0; });
  const auto r = wiener::integrate_via_kstar(z, Hurst(0.75), 100, 5, 4, 64);
  CHECK(r.samples.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.exact_second_moment == doctest::Approx(0.0));
}

TEST_CASE("K*-route variance matches the quadrature norm") {
  const TimeGrid grid(1.0, 32);
  for (double H : {0.25, 0.75}) {
    const Hurst h(H);
    const auto f = sample_scalar(grid, [](double t) { return std::sin(2.0 * t) + 1.0; });
    const auto r = wiener::integrate_via_kstar(f, h, 20000, 21, 8, 384);
    const auto z = harness::mc_compare_variance(col(r.samples, 0), r.exact_second_moment);
    CHECK_MESSAGE(z.pass, "H=", H, " z=", z.z_score);
  }
}

TEST_CASE("K*-route samples look gaussian") {
  const TimeGrid grid(1.0, 16);
  const auto f = sample_scalar(grid, [](double t) { return 1.0 + t; });
  const auto r = wiener::integrate_via_kstar(f, Hurst(0.75), 10000, 33, 4, 128);
  CHECK(!harness::jarque_bera(col(r.samples, 0)).reject_at_1pct);
}

TEST_CASE("distributional agreement of the two simulation routes") {
  // step function driven through both routes: same variance, different draws
  const Hurst h(0.75);
  const TimeGrid grid(1.0, 64);
  Eigen::MatrixXd p(2, 1);
  p << 1.0, -0.5;
  const SimpleFunction fs({0.0, 0.5, 1.0}, p);
  const double exact = wiener::second_moment_exact(fs, h);

  Eigen::MatrixXd vals(65, 1);
  for (int j = 0; j <= 64; ++j) vals(j, 0) = grid.node(j) < 0.5 ? 1.0 : -0.5;
  // direct route
  const auto ps = fbm::sample_paths(grid, h, 20000, 14);
  const auto direct = wiener::integrate_simple(fs, ps);
  CHECK(harness::mc_compare_variance(col(direct, 0), exact).pass);
  // K* route on the step profile (jump-aware integrand)
  const double viaK = fracops::kstar_l2_norm_sq(fracops::from_simple(fs), 1.0, h, 384, 768);
  CHECK(std::abs(viaK - exact) / exact < 0.01);
}
