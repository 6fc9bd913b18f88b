#include "qsym/kernels.hpp"

#include <immintrin.h>

#include <cstddef>

// Two complex<double> per 256-bit register, interleaved [re0 im0 re1 im1].

namespace qsym::kernels::avx2 {
namespace {

inline const double* raw(std::span<const Complex> v) {
  return reinterpret_cast<const double*>(v.data());
}
inline double* raw(std::span<Complex> v) { return reinterpret_cast<double*>(v.data()); }

// (ar + i ai) * x for packed x
inline __m256d cmul(__m256d ar, __m256d ai, __m256d x) {
  const __m256d xs = _mm256_permute_pd(x, 0b0101);
  return _mm256_fmaddsub_pd(ar, x, _mm256_mul_pd(ai, xs));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

Complex dotc(std::span<const Complex> x, std::span<const Complex> y) {
  const std::size_t n = x.size();
  const double* px = raw(x);
  const double* py = raw(y);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(px + 2 * i);
    const __m256d vy = _mm256_loadu_pd(py + 2 * i);
    acc_re = _mm256_fmadd_pd(vx, vy, acc_re);
    acc_im = _mm256_fmadd_pd(vx, _mm256_permute_pd(vy, 0b0101), acc_im);
  }
  // acc_im lanes hold [xr*yi, xi*yr, ...]; the imaginary part is even - odd.
  alignas(32) double im_lanes[4];
  _mm256_store_pd(im_lanes, acc_im);
  double re = hsum(acc_re);
  double im = (im_lanes[0] - im_lanes[1]) + (im_lanes[2] - im_lanes[3]);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y) {
  const std::size_t n = x.size();
  const double* px = raw(x);
  double* py = raw(y);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(px + 2 * i);
    const __m256d vy = _mm256_loadu_pd(py + 2 * i);
    _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(vy, cmul(ar, ai, vx)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double norm_sq(std::span<const Complex> x) {
  const std::size_t n = x.size();
  const double* px = raw(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(px + 2 * i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::norm(x[i]);
  return s;
}

void rotate(std::span<Complex> x, std::span<Complex> y, double c, Complex s) {
  const std::size_t n = x.size();
  double* px = raw(x);
  double* py = raw(y);
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d sr = _mm256_set1_pd(s.real());
  const __m256d si = _mm256_set1_pd(s.imag());
  const __m256d nsi = _mm256_set1_pd(-s.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(px + 2 * i);
    const __m256d vy = _mm256_loadu_pd(py + 2 * i);
    const __m256d nx = _mm256_fmsub_pd(vc, vx, cmul(sr, nsi, vy));
    const __m256d ny = _mm256_fmadd_pd(vc, vy, cmul(sr, si, vx));
    _mm256_storeu_pd(px + 2 * i, nx);
    _mm256_storeu_pd(py + 2 * i, ny);
  }
  const Complex sc = std::conj(s);
  for (; i < n; ++i) {
    const Complex xi = x[i];
    const Complex yi = y[i];
    x[i] = c * xi - sc * yi;
    y[i] = s * xi + c * yi;
  }
}

}  // namespace qsym::kernels::avx2
