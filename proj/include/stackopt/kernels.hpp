#pragma once

// Data-parallel inner loops shared by the degradation integrator, the
// dispatch residual checks and the simplex update step. Each kernel has a
// scalar reference implementation; vector variants are picked once at
// startup from the CPU feature set (override with STACKOPT_SIMD=scalar|avx2|neon).

#include <cstddef>
#include <span>
#include <string_view>

namespace stackopt::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

// Piecewise-linear load-dependent rate rho(pi) = base + slope * max(0, pi - knee).
struct RateCurve {
  double base = 0.0;
  double slope = 0.0;
  double knee = 1.0;
};

struct KernelTable {
  Isa isa;
  double (*rate_sum)(const double* pi, std::size_t n, RateCurve curve, bool skip_idle);
  void (*scale)(const double* x, std::size_t n, double factor, double* out);
  void (*axpy)(double a, const double* x, std::size_t n, double* y);
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
};

const KernelTable& scalar_table();
#if defined(STACKOPT_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(STACKOPT_HAVE_NEON)
const KernelTable& neon_table();
#endif

bool available(Isa isa);
// Throws Error(OutOfRange) when the ISA is not compiled in or not supported by the CPU.
const KernelTable& table(Isa isa);
const KernelTable& active();

// Convenience wrappers over active().
double rate_sum(std::span<const double> pi, RateCurve curve, bool skip_idle);
void scale(std::span<const double> x, double factor, std::span<double> out);
void axpy(double a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> x);
double max_abs(std::span<const double> x);

}  // namespace stackopt::kernels
