#include "k2t/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define K2T_HAVE_AVX2 1
#include <immintrin.h>
#endif

namespace k2t::simd::avx2 {

#if K2T_HAVE_AVX2
namespace {

#define K2T_AVX2_TARGET __attribute__((target("avx2,fma")))

K2T_AVX2_TARGET inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

K2T_AVX2_TARGET double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

K2T_AVX2_TARGET double sum_squares(const double* a, std::size_t n) {
  return dot(a, a, n);
}

K2T_AVX2_TARGET void add_into(double* acc, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(acc + i,
                     _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) acc[i] += x[i];
}

K2T_AVX2_TARGET void scale(double* x, double s, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), vs));
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

}  // namespace k2t::simd::avx2
