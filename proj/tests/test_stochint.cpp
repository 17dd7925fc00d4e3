#include <doctest.h>

#include <cmath>
#include <random>

#include "cylfbm/cauchy.hpp"
#include "cylfbm/fbm.hpp"
#include "cylfbm/fracops.hpp"
#include "cylfbm/harness.hpp"
#include "cylfbm/stochint.hpp"

using namespace cylfbm;

namespace {

std::vector<double> col(const Eigen::MatrixXd& m, int c) {
  return {m.col(c).data(), m.col(c).data() + m.rows()};
}

} // namespace

TEST_CASE("gamma adjoint of the zero integrand is zero") {
  const auto psi = stochint::make_constant(Eigen::MatrixXd::Zero(2, 2));
  const auto emb = cyl::make_diagonal(std::vector<double>{1.0, 0.5});
  Eigen::VectorXd v(2);
  v << 1.0, 2.0;
  const auto g = stochint::gamma_adjoint(psi, emb, v, Hurst(0.75), TimeGrid(1.0, 16), 64);
  CHECK(g.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rank-one integrand reduces to a scalar K* times constants") {
  // Psi(t) = phi(t) x y^T maps U -> V; gamma-adjoint coordinate k is
  // <y, v*> (i* x)_k K*phi
  const int mu = 3, mv = 2;
  Eigen::VectorXd x(mu), y(mv);
  x << 1.0, -0.5, 2.0;
  y << 0.7, 1.3;
  auto phi = [](double t) { return std::exp(-t) + 0.5; };
  const auto psi = stochint::make_dense(
      [=](double t) { return phi(t) * (y * x.transpose()); }, mu, mv);
  const std::vector<double> q{0.9, 0.8, 0.7};
  const auto emb = cyl::make_diagonal(q);
  Eigen::VectorXd v(mv);
  v << 2.0, -1.0;

  const TimeGrid grid(1.0, 48);
  for (double H : {0.25, 0.75}) {
    const Hurst h(H);
    const auto g = stochint::gamma_adjoint(psi, emb, v, h, grid, 256);
    // columnwise structure is exact: every coordinate is the same scalar K*
    // profile scaled by <y,v*> (i* x)_k
    const Eigen::VectorXd base = g.values.col(0) / (y.dot(v) * q[0] * x(0));
    for (int k = 1; k < 3; ++k) {
      const double c = y.dot(v) * q[k] * x(k);
      CHECK((g.values.col(k) - c * base).cwiseAbs().maxCoeff() <
            1e-11 * base.cwiseAbs().maxCoeff() * std::abs(c));
    }
    // and the profile is the scalar K* of phi up to interpolation error
    const auto scalarK = fracops::kstar(sample_scalar(grid, phi), h, 256);
    const double rel = (base - scalarK.values.col(0)).norm() / scalarK.values.col(0).norm();
    CHECK_MESSAGE(rel < 5e-3, "H=", H, " rel=", rel);
  }
}

TEST_CASE("diagonal integrand: coordinate k is q_k K*(e^{-lambda_k .})") {
  const std::vector<double> lam{1.0, 3.0};
  const auto psi = stochint::make_diagonal_semigroup(lam);
  const auto emb = cyl::make_diagonal(std::vector<double>{0.8, 0.6});
  Eigen::VectorXd v(2);
  v << 1.0, 1.0;
  const TimeGrid grid(1.0, 32);
  const Hurst h(0.75);
  const auto g = stochint::gamma_adjoint(psi, emb, v, h, grid, 256);
  for (int k = 0; k < 2; ++k) {
    const auto f = sample_scalar(grid, [&](double t) { return std::exp(-lam[k] * t); });
    const auto kf = fracops::kstar(f, h, 256);
    CHECK((g.values.col(k) - (k == 0 ? 0.8 : 0.6) * kf.values.col(0))
              .cwiseAbs()
              .maxCoeff() < 2e-3);
  }
}

TEST_CASE("covariance of the zero integrand is the zero matrix") {
  const auto psi = stochint::make_constant(Eigen::MatrixXd::Zero(2, 2));
  const auto emb = cyl::make_diagonal(std::vector<double>{1.0, 1.0});
  const auto Q = stochint::covariance_q_psi(psi, emb, Hurst(0.25), 1.0, 96, 96);
  CHECK(Q.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("diagonal integrand gives a diagonal Q_Psi matching the mode variance") {
  const std::vector<double> lam{1.0, 4.0};
  const std::vector<double> q{1.0, 0.5};
  const auto psi = stochint::make_diagonal_semigroup(lam);
  const auto emb = cyl::make_diagonal(q);
  for (double H : {0.25, 0.75}) {
    const Hurst h(H);
    const auto Q = stochint::covariance_q_psi(psi, emb, h, 1.0, 256, 256);
    CHECK(std::abs(Q(0, 1)) <= 1e-12 * Q(0, 0));
    for (int k = 0; k < 2; ++k) {
      const double ref = cauchy::mode_variance_exact(lam[k], q[k], 1.0, h, 2048);
      CHECK_MESSAGE(std::abs(Q(k, k) - ref) / ref < 0.01, "H=", H, " k=", k, " Q=", Q(k, k),
                    " ref=", ref);
    }
  }
}

TEST_CASE("factorisation: the covariance equals the Gram matrix of the same samples") {
  const auto psi = stochint::make_diagonal_semigroup(std::vector<double>{1.0, 2.0});
  const auto emb = cyl::make_diagonal(std::vector<double>{1.0, 0.7});
  const Hurst h(0.75);
  std::vector<Eigen::VectorXd> basis(2, Eigen::VectorXd::Zero(2));
  basis[0](0) = 1.0;
  basis[1](1) = 1.0;
  const auto gq = stochint::gamma_quad(psi, emb, h, 1.0, basis, 128, 128);
  const auto Q = stochint::covariance_from_quad(gq);
  Eigen::MatrixXd manual = Eigen::MatrixXd::Zero(2, 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (std::size_t s = 0; s < gq.t.size(); ++s)
        manual(a, b) += gq.w[s] * gq.values[a].row(s).dot(gq.values[b].row(s));
  CHECK((Q - manual).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("simulate: zero integrand, constant integrand, covariance agreement") {
  const TimeGrid grid(1.0, 32);
  const auto emb = cyl::make_diagonal(std::vector<double>{1.0, 0.6});
  const Hurst h(0.75);

  SUBCASE("zero integrand") {
    const auto z = stochint::make_constant(Eigen::MatrixXd::Zero(2, 2));
    const auto s = stochint::simulate(z, emb, h, grid, 1.0, 100, 3);
    CHECK(s.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("constant identity integrand telescopes to q_k b_k(t)") {
    const auto id = stochint::make_constant(Eigen::MatrixXd::Identity(2, 2));
    const auto s = stochint::simulate(id, emb, h, grid, 1.0, 20000, 3);
    CHECK(harness::mc_compare_variance(col(s, 0), 1.0).pass);
    CHECK(harness::mc_compare_variance(col(s, 1), 0.36).pass);
  }

  SUBCASE("variance matches Q_Psi for the diagonal semigroup") {
    const auto psi = stochint::make_diagonal_semigroup(std::vector<double>{1.0, 2.0});
    const auto Q = stochint::covariance_q_psi(psi, emb, h, 1.0, 256, 256);
    const auto s = stochint::simulate(psi, emb, h, grid, 1.0, 20000, 7, 8);
    for (int k = 0; k < 2; ++k) {
      const auto r = harness::mc_compare_variance(col(s, k), Q(k, k));
      CHECK_MESSAGE(r.pass, "k=", k, " z=", r.z_score);
    }
  }
}

TEST_CASE("isometry per functional: MC variance of Z_Psi v* vs ||Gamma* v*||^2") {
  const auto psi = stochint::make_diagonal_semigroup(std::vector<double>{1.0, 3.0});
  const auto emb = cyl::make_diagonal(std::vector<double>{1.0, 0.7});
  const TimeGrid grid(1.0, 32);
  std::mt19937_64 eng(91);
  std::normal_distribution<double> gauss;
  for (double H : {0.25, 0.75}) {
    const Hurst h(H);
    Eigen::VectorXd v(2);
    v << gauss(eng), gauss(eng);
    const auto gq = stochint::gamma_quad(psi, emb, h, 1.0, {v}, 256, 256);
    const double ref = stochint::covariance_from_quad(gq)(0, 0);
    const auto s = stochint::simulate(psi, emb, h, grid, 1.0, 20000, 23, 8);
    const Eigen::VectorXd proj = s * v;
    std::vector<double> samples(proj.data(), proj.data() + proj.size());
    const auto r = harness::mc_compare_variance(samples, ref);
    CHECK_MESSAGE(r.pass, "H=", H, " z=", r.z_score);
  }
}

TEST_CASE("simulated marginals look gaussian") {
  const auto psi = stochint::make_diagonal_semigroup(std::vector<double>{1.0});
  const auto emb = cyl::make_diagonal(std::vector<double>{1.0});
  const auto s = stochint::simulate(psi, emb, Hurst(0.25), TimeGrid(1.0, 16), 1.0, 10000,
                                    19, 4);
  CHECK(!harness::jarque_bera(col(s, 0)).reject_at_1pct);
}

TEST_CASE("hilbert-schmidt test on the heat semigroup") {
  std::vector<double> lam(64);
  for (int k = 0; k < 64; ++k) lam[k] = (k + 1.0) * (k + 1.0);
  const auto psi = stochint::make_diagonal_semigroup(lam);
  const auto emb = cyl::make_diagonal(std::vector<double>(64, 1.0));

  SUBCASE("H = 0.3: terms ~ k^{-1.2}, integrable") {
    const auto rep = stochint::hs_test(psi, emb, Hurst(0.3), 1.0, 64);
    CHECK(rep.verdict == cyl::Verdict::genuine);
    CHECK(rep.exponent == doctest::Approx(1.2).epsilon(0.08));
    for (std::size_t k = 1; k < rep.partial_sums.size(); ++k)
      CHECK(rep.partial_sums[k] >= rep.partial_sums[k - 1]);
  }
  SUBCASE("H = 0.2: terms ~ k^{-0.8}, not integrable") {
    const auto rep = stochint::hs_test(psi, emb, Hurst(0.2), 1.0, 64);
    CHECK(rep.verdict == cyl::Verdict::cylindrical_only);
    CHECK(rep.exponent == doctest::Approx(0.8).epsilon(0.1));
  }
  SUBCASE("zero embedding weights: integrable with zero sum") {
    const auto z = cyl::make_diagonal(std::vector<double>(8, 0.0));
    const auto psi8 =
        stochint::make_diagonal_semigroup(std::vector<double>(lam.begin(), lam.begin() + 8));
    const auto rep = stochint::hs_test(psi8, z, Hurst(0.3), 1.0, 8);
    CHECK(rep.verdict == cyl::Verdict::genuine);
    CHECK(rep.partial_sums.back() == doctest::Approx(0.0));
  }
}

TEST_CASE("domination transfers integrability") {
  const auto psi = stochint::make_diagonal_semigroup(std::vector<double>{1.0, 2.0});
  const auto emb = cyl::make_diagonal(std::vector<double>{1.0, 0.8});
  const Hurst h(0.75);
  std::vector<Eigen::VectorXd> fs(2, Eigen::VectorXd::Zero(2));
  fs[0](0) = 1.0;
  fs[1](1) = 1.0;

  SUBCASE("Phi = Psi/2 has ratio 1/2") {
    const auto half = stochint::make_dense(
        [&](double t) -> Eigen::MatrixXd { return 0.5 * psi.eval(t); }, 2, 2);
    const auto rep = stochint::domination_check(half, psi, emb, h, 1.0, fs, 96);
    for (double r : rep.ratios) CHECK(r == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(rep.partial_sums_dominated);
  }
  SUBCASE("restriction is dominated with a finite constant") {
    const double cut = 0.5;
    const auto restricted = stochint::make_dense(
        [&, cut](double t) -> Eigen::MatrixXd {
          return t <= cut ? psi.eval(t) : Eigen::MatrixXd::Zero(2, 2).eval();
        },
        2, 2, {cut});
    const auto rep = stochint::domination_check(restricted, psi, emb, h, 1.0, fs, 96);
    CHECK(rep.max_ratio > 0.0);
    CHECK(rep.max_ratio < 2.0);
    CHECK(rep.partial_sums_dominated);
    MESSAGE("restriction constant c_t at t=0.5: ", rep.max_ratio);
  }
  SUBCASE("Phi = 0 has ratio 0") {
    const auto zero = stochint::make_constant(Eigen::MatrixXd::Zero(2, 2));
    const auto rep = stochint::domination_check(zero, psi, emb, h, 1.0, fs, 96);
    for (double r : rep.ratios) CHECK(r == doctest::Approx(0.0));
  }
}

TEST_CASE("mean-square continuity of the integral process") {
  const auto psi = stochint::make_diagonal_semigroup(std::vector<double>{1.0});
  const auto emb = cyl::make_diagonal(std::vector<double>{1.0});
  Eigen::VectorXd v(1);
  v << 1.0;
  for (double H : {0.25, 0.75}) {
    const Hurst h(H);
    const std::vector<double> dts{0.2, 0.1, 0.05, 0.025, 0.0};
    const auto e = stochint::mean_square_continuity(psi, emb, h, 1.0, v, 0.4, dts, 384);
    CHECK(e.back() == doctest::Approx(0.0));
    for (std::size_t i = 1; i + 1 < e.size(); ++i) CHECK(e[i] < e[i - 1]);
    if (H > 0.5) {
      std::vector<double> errs(e.begin(), e.end() - 1), hs(dts.begin(), dts.end() - 1);
      const double rate = harness::convergence_rate(errs, hs);
      MESSAGE("H=0.75 mean-square continuity rate (expect ~2H): ", rate);
      CHECK(rate > 0.0);
    }
  }
}
