#include "cylfbm/kernels.hpp"

namespace cylfbm::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot3_scalar(const double* w, const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * a[i] * b[i];
  return s;
}

double sum_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i];
  return s;
}

void axpy_scalar(double c, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += c * x[i];
}

void scale_scalar(double c, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= c;
}

void add_scaled_diff_scalar(double c, const double* a, const double* b, double* y,
                            std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += c * (a[i] - b[i]);
}

} // namespace cylfbm::kernels::detail
