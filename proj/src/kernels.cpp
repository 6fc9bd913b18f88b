#include "qsym/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace qsym::kernels {
namespace {

Isa detect() noexcept {
  if (const char* env = std::getenv("QSYM_ISA"); env != nullptr && std::string(env) == "scalar")
    return Isa::scalar;
  if (isa_available(Isa::avx2)) return Isa::avx2;
  return Isa::scalar;
}

std::atomic<Isa>& current() noexcept {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(QSYM_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

Isa set_active_isa(Isa isa) noexcept {
  if (!isa_available(isa)) isa = Isa::scalar;
  return current().exchange(isa);
}

Complex dotc(std::span<const Complex> x, std::span<const Complex> y) {
#if defined(QSYM_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::dotc(x, y);
#endif
  return scalar::dotc(x, y);
}

void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y) {
#if defined(QSYM_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::axpy(a, x, y);
#endif
  scalar::axpy(a, x, y);
}

double norm_sq(std::span<const Complex> x) {
#if defined(QSYM_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::norm_sq(x);
#endif
  return scalar::norm_sq(x);
}

void rotate(std::span<Complex> x, std::span<Complex> y, double c, Complex s) {
#if defined(QSYM_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::rotate(x, y, c, s);
#endif
  scalar::rotate(x, y, c, s);
}

}  // namespace qsym::kernels
