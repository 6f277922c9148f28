#include "k2t/simd/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace k2t::simd::neon {

#if defined(__aarch64__)
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_squares(const double* a, std::size_t n) { return dot(a, a, n); }

void add_into(double* acc, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vld1q_f64(x + i)));
  }
  for (; i < n; ++i) acc[i] += x[i];
}

void scale(double* x, double s, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(x + i, vmulq_n_f64(vld1q_f64(x + i), s));
  }
  for (; i < n; ++i) x[i] *= s;
}

}  // namespace

const KernelTable* table() noexcept {
  static const KernelTable t{dot, sum_squares, add_into, scale};
  return &t;
}
#else
const KernelTable* table() noexcept { return nullptr; }
#endif

}  // namespace k2t::simd::neon
