#include <arm_neon.h>

#include <cmath>
#include <limits>

#include "stackopt/kernels.hpp"

namespace stackopt::kernels {
namespace {

double rate_sum_neon(const double* pi, std::size_t n, RateCurve curve, bool skip_idle) {
  const float64x2_t base = vdupq_n_f64(curve.base);
  const float64x2_t slope = vdupq_n_f64(curve.slope);
  const float64x2_t knee = vdupq_n_f64(curve.knee);
  const float64x2_t zero = vdupq_n_f64(0.0);
  float64x2_t acc = zero;
  std::size_t t = 0;
  for (; t + 2 <= n; t += 2) {
    float64x2_t p = vld1q_f64(pi + t);
    float64x2_t r = vfmaq_f64(base, slope, vmaxq_f64(zero, vsubq_f64(p, knee)));
    if (skip_idle) {
      uint64x2_t active = vcgtq_f64(p, zero);
      r = vreinterpretq_f64_u64(vandq_u64(vreinterpretq_u64_f64(r), active));
    }
    acc = vaddq_f64(acc, r);
  }
  double s = vaddvq_f64(acc);
  for (; t < n; ++t) {
    if (skip_idle && !(pi[t] > 0.0)) continue;
    double over = pi[t] - curve.knee;
    s += curve.base + curve.slope * (over > 0.0 ? over : 0.0);
  }
  return s;
}

void scale_neon(const double* x, std::size_t n, double factor, double* out) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_n_f64(vld1q_f64(x + i), factor));
  for (; i < n; ++i) out[i] = x[i] * factor;
}

void axpy_neon(double a, const double* x, std::size_t n, double* y) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_neon(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double max_abs_neon(const double* x, std::size_t n) {
  float64x2_t m = vdupq_n_f64(0.0);
  bool any_nan = false;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t v = vld1q_f64(x + i);
    uint64x2_t ordered = vceqq_f64(v, v);
    any_nan |= (vgetq_lane_u64(ordered, 0) & vgetq_lane_u64(ordered, 1)) != ~0ull;
    m = vmaxnmq_f64(m, vabsq_f64(v));
  }
  double r = vmaxvq_f64(m);
  for (; i < n; ++i) {
    any_nan |= std::isnan(x[i]);
    double a = std::fabs(x[i]);
    r = a > r ? a : r;
  }
  return any_nan ? std::numeric_limits<double>::quiet_NaN() : r;
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable t{Isa::Neon, rate_sum_neon, scale_neon,  axpy_neon,
                             dot_neon,  sum_neon,      max_abs_neon};
  return t;
}

}  // namespace stackopt::kernels
