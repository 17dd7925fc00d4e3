#include <doctest.h>

#include <random>
#include <vector>

#include "cylfbm/kernels.hpp"

using namespace cylfbm;

namespace {

std::vector<double> random_vec(std::mt19937_64& eng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(eng);
  return v;
}

// lengths crossing the vector-width boundaries
const std::size_t kLens[] = {1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 32, 33, 63, 64, 100, 1023};

} // namespace

TEST_CASE("scalar and avx2 kernels agree within accumulation tolerance") {
  if (!kernels::detail::avx2_available()) {
    MESSAGE("avx2 not available on this host; skipping equivalence");
    return;
  }
  std::mt19937_64 eng(123);
  for (std::size_t n : kLens) {
    const auto a = random_vec(eng, n);
    const auto b = random_vec(eng, n);
    const auto w = random_vec(eng, n);

    const double tol = 1e-13 * static_cast<double>(n + 1);

    CHECK(kernels::detail::dot_scalar(a.data(), b.data(), n) ==
          doctest::Approx(kernels::detail::dot_avx2(a.data(), b.data(), n)).epsilon(tol));
    CHECK(kernels::detail::dot3_scalar(w.data(), a.data(), b.data(), n) ==
          doctest::Approx(kernels::detail::dot3_avx2(w.data(), a.data(), b.data(), n))
              .epsilon(tol));
    CHECK(kernels::detail::sum_scalar(a.data(), n) ==
          doctest::Approx(kernels::detail::sum_avx2(a.data(), n)).epsilon(tol));

    auto y1 = random_vec(eng, n);
    auto y2 = y1;
    kernels::detail::axpy_scalar(0.7, a.data(), y1.data(), n);
    kernels::detail::axpy_avx2(0.7, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-14));

    auto z1 = random_vec(eng, n);
    auto z2 = z1;
    kernels::detail::add_scaled_diff_scalar(1.3, a.data(), b.data(), z1.data(), n);
    kernels::detail::add_scaled_diff_avx2(1.3, a.data(), b.data(), z2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(z1[i] == doctest::Approx(z2[i]).epsilon(1e-14));

    auto s1 = random_vec(eng, n);
    auto s2 = s1;
    kernels::detail::scale_scalar(-0.25, s1.data(), n);
    kernels::detail::scale_avx2(-0.25, s2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(s1[i] == s2[i]);
  }
}

TEST_CASE("dispatch honours forced backend") {
  const auto original = kernels::active_backend();
  kernels::force_backend(kernels::Backend::scalar);
  CHECK(kernels::active_backend() == kernels::Backend::scalar);
  const double v[] = {1.0, 2.0, 3.0};
  CHECK(kernels::dot(v, v, 3) == doctest::Approx(14.0));
  if (kernels::detail::avx2_available()) {
    kernels::force_backend(kernels::Backend::avx2);
    CHECK(kernels::active_backend() == kernels::Backend::avx2);
    CHECK(kernels::dot(v, v, 3) == doctest::Approx(14.0));
  }
  kernels::force_backend(original);
}

TEST_CASE("kernel reference semantics") {
  const double a[] = {1.0, -2.0, 0.5, 4.0};
  const double b[] = {2.0, 1.0, -1.0, 0.25};
  CHECK(kernels::dot(a, b, 4) == doctest::Approx(0.5));
  CHECK(kernels::sum(a, 4) == doctest::Approx(3.5));
  double y[] = {0.0, 0.0, 0.0, 0.0};
  kernels::axpy(2.0, a, y, 4);
  CHECK(y[3] == doctest::Approx(8.0));
  kernels::add_scaled_diff(1.0, a, b, y, 4);
  CHECK(y[0] == doctest::Approx(2.0 + (1.0 - 2.0)));
}
