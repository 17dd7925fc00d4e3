#include "cylfbm/kernels.hpp"

#include <cstdlib>

namespace cylfbm::kernels {

namespace {

struct Table {
  Backend backend;
  double (*dot)(const double*, const double*, std::size_t);
  double (*dot3)(const double*, const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scale)(double, double*, std::size_t);
  void (*add_scaled_diff)(double, const double*, const double*, double*, std::size_t);
};

constexpr Table scalar_table{Backend::scalar,
                             detail::dot_scalar,
                             detail::dot3_scalar,
                             detail::sum_scalar,
                             detail::axpy_scalar,
                             detail::scale_scalar,
                             detail::add_scaled_diff_scalar};

#if defined(__x86_64__) || defined(__i386__)
constexpr Table avx2_table{Backend::avx2,
                           detail::dot_avx2,
                           detail::dot3_avx2,
                           detail::sum_avx2,
                           detail::axpy_avx2,
                           detail::scale_avx2,
                           detail::add_scaled_diff_avx2};
#endif

Table select_initial() {
  if (const char* e = std::getenv("CYLFBM_FORCE_SCALAR"); e && e[0] == '1')
    return scalar_table;
#if defined(__x86_64__) || defined(__i386__)
  if (detail::avx2_available()) return avx2_table;
#endif
  return scalar_table;
}

Table& table() {
  static Table t = select_initial();
  return t;
}

} // namespace

namespace detail {

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

} // namespace detail

Backend active_backend() { return table().backend; }

void force_backend(Backend b) {
#if defined(__x86_64__) || defined(__i386__)
  if (b == Backend::avx2 && detail::avx2_available()) {
    table() = avx2_table;
    return;
  }
#endif
  table() = scalar_table;
}

double dot(const double* a, const double* b, std::size_t n) { return table().dot(a, b, n); }
double dot3(const double* w, const double* a, const double* b, std::size_t n) {
  return table().dot3(w, a, b, n);
}
double sum(const double* a, std::size_t n) { return table().sum(a, n); }
void axpy(double c, const double* x, double* y, std::size_t n) { table().axpy(c, x, y, n); }
void scale(double c, double* y, std::size_t n) { table().scale(c, y, n); }
void add_scaled_diff(double c, const double* a, const double* b, double* y, std::size_t n) {
  table().add_scaled_diff(c, a, b, y, n);
}

} // namespace cylfbm::kernels
