#include <algorithm>
#include <cmath>

#include "stackopt/kernels.hpp"

namespace stackopt::kernels {
namespace {

double rate_sum_scalar(const double* pi, std::size_t n, RateCurve curve, bool skip_idle) {
  double acc = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (skip_idle && !(pi[t] > 0.0)) continue;
    acc += curve.base + curve.slope * std::max(0.0, pi[t] - curve.knee);
  }
  return acc;
}

void scale_scalar(const double* x, std::size_t n, double factor, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * factor;
}

void axpy_scalar(double a, const double* x, std::size_t n, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

// NaN anywhere in the input yields NaN.
double max_abs_scalar(const double* x, std::size_t n) {
  double m = 0.0;
  bool nan = false;
  for (std::size_t i = 0; i < n; ++i) {
    nan |= std::isnan(x[i]);
    m = std::max(m, std::fabs(x[i]));
  }
  return nan ? std::nan("") : m;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{Isa::Scalar,  rate_sum_scalar, scale_scalar, axpy_scalar,
                             dot_scalar,   sum_scalar,      max_abs_scalar};
  return t;
}

}  // namespace stackopt::kernels
