#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cylfbm/cyl_process.hpp"
#include "cylfbm/fbm.hpp"
#include "cylfbm/harness.hpp"

using namespace cylfbm;

namespace {

std::vector<double> col(const Eigen::MatrixXd& m, int c) {
  return {m.col(c).data(), m.col(c).data() + m.rows()};
}

} // namespace

TEST_CASE("diagonal embedding: covariance operator and single-mode projection") {
  const std::vector<double> q{0.9, 0.5, 0.25};
  const auto emb = cyl::make_diagonal(q);
  const Eigen::MatrixXd Q = cyl::covariance_operator(emb);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(Q(i, j) == doctest::Approx(i == j ? q[i] * q[i] : 0.0));

  const Hurst h(0.75);
  const TimeGrid grid(1.0, 16);
  const cyl::CylFbm B{emb, h, grid, 20000, 77};
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(3);
  e1(0) = 1.0;
  const auto s = cyl::apply_many(B, {{1.0, e1}});
  CHECK(harness::mc_compare_variance(col(s, 0), q[0] * q[0]).pass);

  // zero functional gives identically zero samples
  const auto z = cyl::apply_many(B, {{1.0, Eigen::VectorXd::Zero(3)}});
  CHECK(z.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("zero weights give the zero covariance operator") {
  const auto emb = cyl::make_diagonal(std::vector<double>{0.0, 0.0});
  CHECK(cyl::covariance_operator(emb).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sheet covariance operator against a hand computation") {
  // two cells, small grid: Q = sum_k c_k c_k^T with
  // c_k(i) = q_k 1_{A_k}(x_i) sqrt(2/m) sin(k pi x_i)
  const int m = 4;
  const std::vector<double> q{2.0, 3.0};
  const std::vector<std::pair<double, double>> cells{{0.0, 0.5}, {0.5, 1.0}};
  const auto emb = cyl::make_sheet(m, q, cells);
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < 2; ++k) {
    Eigen::VectorXd c(m);
    for (int i = 0; i < m; ++i) {
      const double x = (i + 0.5) / m;
      const bool in = x >= cells[k].first && x < cells[k].second;
      c(i) = in ? q[k] * std::sqrt(2.0 / m) * std::sin((k + 1) * std::numbers::pi * x) : 0.0;
    }
    expect += c * c.transpose();
  }
  CHECK((cyl::covariance_operator(emb) - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("weighted-basis embedding: norms follow the tau scaling") {
  const auto emb = cyl::make_weighted_basis(
      64, 8, [](int k, double) { return 1.0 / k; }, 2.0);
  for (int k = 0; k < 8; ++k) {
    // ||i e_k||^2 = ||tau_k e_k||^2 = (1/k^2) ||e_k||^2 = 1/k^2 on the midpoint grid
    CHECK(emb.norm_sq(k) == doctest::Approx(1.0 / ((k + 1.0) * (k + 1.0))).epsilon(1e-12));
  }
}

TEST_CASE("two-dimensional projection law") {
  const std::vector<double> q{1.0, 0.5, 0.3, 0.2};
  const auto emb = cyl::make_diagonal(q);
  const Eigen::MatrixXd Q = cyl::covariance_operator(emb);
  const Hurst h(0.25);
  const TimeGrid grid(1.0, 16);
  std::mt19937_64 eng(3);
  std::normal_distribution<double> g;
  Eigen::VectorXd u(4), v(4);
  for (int i = 0; i < 4; ++i) u(i) = g(eng);
  for (int i = 0; i < 4; ++i) v(i) = g(eng);

  const cyl::CylFbm B{emb, h, grid, 30000, 11};
  const double s = 0.5, t = 1.0;
  const auto samples = cyl::apply_many(B, {{s, u}, {t, v}, {s, v}, {t, u}});
  const double R = fbm::covariance(s, t, h);
  CHECK(harness::mc_compare_cov(col(samples, 0), col(samples, 1), u.dot(Q * v) * R).pass);
  CHECK(harness::mc_compare_cov(col(samples, 2), col(samples, 3), v.dot(Q * u) * R).pass);
  CHECK(harness::mc_compare_variance(col(samples, 0),
                                     u.dot(Q * u) * fbm::covariance(s, s, h))
            .pass);
}

TEST_CASE("pathwise linearity of B(t)") {
  const auto emb = cyl::make_diagonal(std::vector<double>{1.0, 0.5});
  const cyl::CylFbm B{emb, Hurst(0.75), TimeGrid(1.0, 8), 50, 13};
  Eigen::VectorXd u(2), v(2);
  u << 1.0, -1.0;
  v << 0.5, 2.0;
  const Eigen::VectorXd w = 2.0 * u + 3.0 * v;
  const auto su = cyl::apply_many(B, {{1.0, u}});
  const auto sv = cyl::apply_many(B, {{1.0, v}});
  const auto sw = cyl::apply_many(B, {{1.0, w}});
  CHECK((sw - 2.0 * su - 3.0 * sv).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("representation independence under basis rotation") {
  const auto emb = cyl::make_diagonal(std::vector<double>{1.0, 0.7, 0.4, 0.2});
  const Eigen::MatrixXd Q = cyl::covariance_operator(emb);
  std::mt19937_64 eng(4);
  std::normal_distribution<double> g;
  Eigen::MatrixXd G(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) G(i, j) = g(eng);
  const Eigen::MatrixXd O = Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ();
  cyl::Embedding rot = emb;
  rot.coeff = emb.coeff * O;
  CHECK((cyl::covariance_operator(rot) - Q).norm() <= 1e-12 * Q.norm());
}

TEST_CASE("hilbert-schmidt verdicts") {
  SUBCASE("q_k = 1/k converges to pi^2/6") {
    std::vector<double> q(256);
    for (int k = 0; k < 256; ++k) q[k] = 1.0 / (k + 1);
    const auto emb = cyl::make_diagonal(q, 2.0);
    const auto rep = cyl::is_genuine(emb, 256);
    CHECK(rep.verdict == cyl::Verdict::genuine);
    const double target = std::numbers::pi * std::numbers::pi / 6.0;
    CHECK(rep.partial_sums.back() < target);
    // integral-test tail bound: pi^2/6 - S_N is between 1/(N+1) and 1/N
    CHECK(target - rep.partial_sums.back() > 1.0 / 257.0);
    CHECK(target - rep.partial_sums.back() < 1.0 / 256.0);
  }
  SUBCASE("q_k = 1 diverges") {
    const auto emb = cyl::make_diagonal(std::vector<double>(64, 1.0), 0.0);
    CHECK(cyl::is_genuine(emb, 64).verdict == cyl::Verdict::cylindrical_only);
  }
  SUBCASE("q_k = k^{-1/2}: harmonic divergence, decided by the declared rule") {
    std::vector<double> q(64);
    for (int k = 0; k < 64; ++k) q[k] = 1.0 / std::sqrt(k + 1.0);
    const auto emb = cyl::make_diagonal(q, 1.0);
    CHECK(cyl::is_genuine(emb, 64).verdict == cyl::Verdict::cylindrical_only);
  }
  SUBCASE("fitted exponent without a declared rule") {
    std::vector<double> q(128);
    for (int k = 0; k < 128; ++k) q[k] = 1.0 / (k + 1.0);
    const auto emb = cyl::make_diagonal(q); // no declaration: fit
    const auto rep = cyl::is_genuine(emb, 128);
    CHECK(rep.verdict == cyl::Verdict::genuine);
    CHECK(rep.exponent == doctest::Approx(2.0).epsilon(0.05));
    CHECK(!rep.exponent_declared);
  }
  SUBCASE("boundary exponent is inconclusive when fitted") {
    std::vector<double> q(128);
    for (int k = 0; k < 128; ++k) q[k] = 1.0 / std::sqrt(k + 1.0);
    const auto emb = cyl::make_diagonal(q);
    CHECK(cyl::is_genuine(emb, 128).verdict == cyl::Verdict::inconclusive);
  }
  SUBCASE("partial sums are nondecreasing") {
    std::vector<double> q(32);
    for (int k = 0; k < 32; ++k) q[k] = 1.0 / (k + 1.0);
    const auto rep = cyl::is_genuine(cyl::make_diagonal(q), 32);
    for (std::size_t k = 1; k < rep.partial_sums.size(); ++k)
      CHECK(rep.partial_sums[k] >= rep.partial_sums[k - 1]);
  }
}

TEST_CASE("apply requires grid times and matching dimension") {
  const auto emb = cyl::make_diagonal(std::vector<double>{1.0});
  const cyl::CylFbm B{emb, Hurst(0.75), TimeGrid(1.0, 4), 4, 1};
  Eigen::VectorXd u(1);
  u << 1.0;
  CHECK_THROWS_AS((void)cyl::apply_many(B, {{0.3, u}}), std::domain_error);
  Eigen::VectorXd bad(2);
  bad << 1.0, 2.0;
  CHECK_THROWS_AS((void)cyl::apply_many(B, {{0.5, bad}}), std::invalid_argument);
}
