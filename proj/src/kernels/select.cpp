#include <cstdlib>
#include <string>

#include "stackopt/error.hpp"
#include "stackopt/kernels.hpp"

namespace stackopt::kernels {
namespace {

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(STACKOPT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(STACKOPT_HAVE_NEON)
      return true;  // mandatory on aarch64
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& pick() {
  if (const char* env = std::getenv("STACKOPT_SIMD")) {
    std::string want(env);
    if (want == "scalar") return scalar_table();
    if (want == "avx2" && available(Isa::Avx2)) return table(Isa::Avx2);
    if (want == "neon" && available(Isa::Neon)) return table(Isa::Neon);
  }
  if (available(Isa::Avx2)) return table(Isa::Avx2);
  if (available(Isa::Neon)) return table(Isa::Neon);
  return scalar_table();
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool available(Isa isa) { return cpu_supports(isa); }

const KernelTable& table(Isa isa) {
  if (!available(isa)) {
    throw Error(ErrorKind::OutOfRange, "kernel ISA '" + std::string(to_string(isa)) + "' unavailable");
  }
  switch (isa) {
#if defined(STACKOPT_HAVE_AVX2)
    case Isa::Avx2: return avx2_table();
#endif
#if defined(STACKOPT_HAVE_NEON)
    case Isa::Neon: return neon_table();
#endif
    default: return scalar_table();
  }
}

const KernelTable& active() {
  static const KernelTable& t = pick();
  return t;
}

double rate_sum(std::span<const double> pi, RateCurve curve, bool skip_idle) {
  return active().rate_sum(pi.data(), pi.size(), curve, skip_idle);
}

void scale(std::span<const double> x, double factor, std::span<double> out) {
  if (out.size() != x.size()) throw Error(ErrorKind::LengthMismatch, "scale: output size differs from input");
  active().scale(x.data(), x.size(), factor, out.data());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (y.size() != x.size()) throw Error(ErrorKind::LengthMismatch, "axpy: size mismatch");
  active().axpy(a, x.data(), x.size(), y.data());
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::LengthMismatch, "dot: size mismatch");
  return active().dot(a.data(), b.data(), a.size());
}

double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

double max_abs(std::span<const double> x) { return active().max_abs(x.data(), x.size()); }

}  // namespace stackopt::kernels
