#include "qsym/kernels.hpp"

#include <cstddef>

namespace qsym::kernels::scalar {

Complex dotc(std::span<const Complex> x, std::span<const Complex> y) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = {y[i].real() + ar * xr - ai * xi, y[i].imag() + ar * xi + ai * xr};
  }
}

double norm_sq(std::span<const Complex> x) {
  double acc = 0.0;
  for (const Complex& v : x) acc += v.real() * v.real() + v.imag() * v.imag();
  return acc;
}

void rotate(std::span<Complex> x, std::span<Complex> y, double c, Complex s) {
  const Complex sc = std::conj(s);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Complex xi = x[i];
    const Complex yi = y[i];
    x[i] = c * xi - sc * yi;
    y[i] = s * xi + c * yi;
  }
}

}  // namespace qsym::kernels::scalar
