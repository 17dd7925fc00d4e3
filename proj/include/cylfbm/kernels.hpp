#pragma once

// Data-parallel inner-loop kernels with runtime ISA dispatch.
//
// Every kernel has a scalar reference implementation and, on x86-64 with
// AVX2+FMA, a vectorized variant selected once at startup. The two variants
// are equivalence-tested against each other (floating-point reordering means
// equality up to accumulation tolerance, not bit equality). Set
// CYLFBM_FORCE_SCALAR=1 to pin the scalar path.

#include <cstddef>
#include <span>

namespace cylfbm::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
void force_backend(Backend b);

// sum_i a[i]*b[i]
double dot(const double* a, const double* b, std::size_t n);
// sum_i w[i]*a[i]*b[i]
double dot3(const double* w, const double* a, const double* b, std::size_t n);
// sum_i a[i]
double sum(const double* a, std::size_t n);
// y[i] += c*x[i]
void axpy(double c, const double* x, double* y, std::size_t n);
// y[i] *= c
void scale(double c, double* y, std::size_t n);
// y[i] += c*(a[i]-b[i])
void add_scaled_diff(double c, const double* a, const double* b, double* y, std::size_t n);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return dot(a.data(), b.data(), a.size());
}
inline double sum(std::span<const double> a) { return sum(a.data(), a.size()); }

namespace detail {

double dot_scalar(const double* a, const double* b, std::size_t n);
double dot3_scalar(const double* w, const double* a, const double* b, std::size_t n);
double sum_scalar(const double* a, std::size_t n);
void axpy_scalar(double c, const double* x, double* y, std::size_t n);
void scale_scalar(double c, double* y, std::size_t n);
void add_scaled_diff_scalar(double c, const double* a, const double* b, double* y, std::size_t n);

bool avx2_available();

#if defined(__x86_64__) || defined(__i386__)
double dot_avx2(const double* a, const double* b, std::size_t n);
double dot3_avx2(const double* w, const double* a, const double* b, std::size_t n);
double sum_avx2(const double* a, std::size_t n);
void axpy_avx2(double c, const double* x, double* y, std::size_t n);
void scale_avx2(double c, double* y, std::size_t n);
void add_scaled_diff_avx2(double c, const double* a, const double* b, double* y, std::size_t n);
#endif

} // namespace detail

} // namespace cylfbm::kernels
