#pragma once

// Inner-loop kernels over contiguous complex<double> ranges. Every kernel has
// a scalar reference implementation; vectorized variants are selected at
// runtime from the host's instruction-set support and must agree with the
// reference to rounding.

#include <complex>
#include <span>
#include <string_view>

namespace qsym::kernels {

using Complex = std::complex<double>;

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

// True when the variant was compiled in and the CPU supports it.
bool isa_available(Isa isa) noexcept;

// Currently dispatched variant. Initialized from the CPU on first use; the
// environment variable QSYM_ISA=scalar forces the reference path.
Isa active_isa() noexcept;

// Override dispatch (tests, benchmarks). Returns the previous value. Requests
// for unavailable variants fall back to scalar.
Isa set_active_isa(Isa isa) noexcept;

// sum_i conj(x_i) * y_i
Complex dotc(std::span<const Complex> x, std::span<const Complex> y);

// y += a * x
void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y);

// sum_i |x_i|^2
double norm_sq(std::span<const Complex> x);

// Plane rotation used by Jacobi sweeps:
//   x <- c*x - conj(s)*y,  y <- s*x + c*y
void rotate(std::span<Complex> x, std::span<Complex> y, double c, Complex s);

namespace scalar {
Complex dotc(std::span<const Complex> x, std::span<const Complex> y);
void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y);
double norm_sq(std::span<const Complex> x);
void rotate(std::span<Complex> x, std::span<Complex> y, double c, Complex s);
}  // namespace scalar

#if defined(QSYM_HAVE_AVX2)
namespace avx2 {
Complex dotc(std::span<const Complex> x, std::span<const Complex> y);
void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y);
double norm_sq(std::span<const Complex> x);
void rotate(std::span<Complex> x, std::span<Complex> y, double c, Complex s);
}  // namespace avx2
#endif

}  // namespace qsym::kernels
