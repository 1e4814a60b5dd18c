#include <immintrin.h>

#include <cmath>
#include <limits>

#include "stackopt/kernels.hpp"

namespace stackopt::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, swapped));
}

double rate_sum_avx2(const double* pi, std::size_t n, RateCurve curve, bool skip_idle) {
  const __m256d base = _mm256_set1_pd(curve.base);
  const __m256d slope = _mm256_set1_pd(curve.slope);
  const __m256d knee = _mm256_set1_pd(curve.knee);
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc0 = zero;
  __m256d acc1 = zero;
  std::size_t t = 0;
  for (; t + 8 <= n; t += 8) {
    __m256d p0 = _mm256_loadu_pd(pi + t);
    __m256d p1 = _mm256_loadu_pd(pi + t + 4);
    __m256d r0 = _mm256_fmadd_pd(slope, _mm256_max_pd(zero, _mm256_sub_pd(p0, knee)), base);
    __m256d r1 = _mm256_fmadd_pd(slope, _mm256_max_pd(zero, _mm256_sub_pd(p1, knee)), base);
    if (skip_idle) {
      r0 = _mm256_and_pd(r0, _mm256_cmp_pd(p0, zero, _CMP_GT_OQ));
      r1 = _mm256_and_pd(r1, _mm256_cmp_pd(p1, zero, _CMP_GT_OQ));
    }
    acc0 = _mm256_add_pd(acc0, r0);
    acc1 = _mm256_add_pd(acc1, r1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; t < n; ++t) {
    if (skip_idle && !(pi[t] > 0.0)) continue;
    double over = pi[t] - curve.knee;
    acc += curve.base + curve.slope * (over > 0.0 ? over : 0.0);
  }
  return acc;
}

void scale_avx2(const double* x, std::size_t n, double factor, double* out) {
  const __m256d f = _mm256_set1_pd(factor);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), f));
  for (; i < n; ++i) out[i] = x[i] * factor;
}

void axpy_avx2(double a, const double* x, std::size_t n, double* y) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

double max_abs_avx2(const double* x, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  __m256d nan = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    nan = _mm256_or_pd(nan, _mm256_cmp_pd(v, v, _CMP_UNORD_Q));
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign, v));
  }
  bool any_nan = _mm256_movemask_pd(nan) != 0;
  double r = hmax(m);
  for (; i < n; ++i) {
    any_nan |= std::isnan(x[i]);
    double a = std::fabs(x[i]);
    r = a > r ? a : r;
  }
  return any_nan ? std::numeric_limits<double>::quiet_NaN() : r;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{Isa::Avx2, rate_sum_avx2, scale_avx2,  axpy_avx2,
                             dot_avx2,  sum_avx2,      max_abs_avx2};
  return t;
}

}  // namespace stackopt::kernels
