#include "qsym/cnum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qsym/errors.hpp"
#include "qsym/kernels.hpp"

namespace qsym::cnum {

void Tolerance::validate() const {
  if (!(eps_eq > 0.0) || !(eps_rank > 0.0))
    throw ArgumentError("tolerances must be strictly positive");
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{}) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols)
    throw ShapeError("matrix entry count " + std::to_string(data_.size()) + " != " +
                     std::to_string(rows) + "x" + std::to_string(cols));
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::from_columns(std::span<const Vector> columns, std::size_t rows) {
  CMatrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) m.set_col(j, columns[j]);
  return m;
}

CMatrix CMatrix::column(std::span<const Complex> v) {
  return CMatrix(v.size(), 1, std::vector<Complex>(v.begin(), v.end()));
}

CMatrix CMatrix::row(std::span<const Complex> v) {
  return CMatrix(1, v.size(), std::vector<Complex>(v.begin(), v.end()));
}

Vector CMatrix::col(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void CMatrix::set_col(std::size_t j, std::span<const Complex> v) {
  if (v.size() != rows_) throw ShapeError("column length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

CMatrix CMatrix::transpose() const {
  CMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

CMatrix CMatrix::conj() const {
  CMatrix m = *this;
  for (auto& z : m.data_) z = std::conj(z);
  return m;
}

CMatrix CMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw ShapeError("block out of range");
  CMatrix m(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
  return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw ShapeError("matrix sum shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw ShapeError("matrix difference shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

double CMatrix::max_abs() const noexcept { return cnum::max_abs(data_); }

double CMatrix::frobenius() const noexcept { return std::sqrt(kernels::norm_sq(data_)); }

bool CMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(Complex s, CMatrix a) { return a *= s; }

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows())
    throw ShapeError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  CMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = c.row_span(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      kernels::axpy(aik, b.row_span(k), out);
    }
  }
  return c;
}

Vector matvec(const CMatrix& a, std::span<const Complex> x) {
  if (a.cols() != x.size()) throw ShapeError("matvec: dimension mismatch");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex acc{};
    auto r = a.row_span(i);
    for (std::size_t k = 0; k < x.size(); ++k) acc += r[k] * x[k];
    y[i] = acc;
  }
  return y;
}

Vector vecmat(std::span<const Complex> x, const CMatrix& a) {
  if (a.rows() != x.size()) throw ShapeError("vecmat: dimension mismatch");
  Vector y(a.cols());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] == Complex{}) continue;
    kernels::axpy(x[k], a.row_span(k), y);
  }
  return y;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return c;
}

Vector kron(std::span<const Complex> a, std::span<const Complex> b) {
  Vector c(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) c[i * b.size() + k] = a[i] * b[k];
  return c;
}

CMatrix hstack(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows()) throw ShapeError("hstack: row mismatch");
  CMatrix c(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
  }
  return c;
}

CMatrix vstack(const CMatrix& a, const CMatrix& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.cols() != b.cols()) throw ShapeError("vstack: column mismatch");
  std::vector<Complex> d(a.entries().begin(), a.entries().end());
  d.insert(d.end(), b.entries().begin(), b.entries().end());
  return CMatrix(a.rows() + b.rows(), a.cols(), std::move(d));
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("max_abs_diff: shape mismatch");
  return max_abs_diff(a.entries(), b.entries());
}

double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw ShapeError("max_abs_diff: length mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

double norm2(std::span<const Complex> v) { return std::sqrt(kernels::norm_sq(v)); }

double max_abs(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

// ---------------------------------------------------------------------------
// Subspace

Subspace::Subspace(std::size_t ambient_dim) : ambient_(ambient_dim), basis_(ambient_dim, 0) {}

Subspace::Subspace(std::size_t ambient_dim, CMatrix basis)
    : ambient_(ambient_dim), basis_(std::move(basis)) {
  if (basis_.rows() != ambient_ && !(basis_.cols() == 0))
    throw ShapeError("subspace basis rows != ambient dimension");
  if (basis_.cols() == 0) basis_ = CMatrix(ambient_, 0);
  if (basis_.cols() > ambient_) throw ShapeError("subspace basis larger than ambient space");
}

Subspace Subspace::full(std::size_t ambient_dim) {
  return Subspace(ambient_dim, CMatrix::identity(ambient_dim));
}

CMatrix Subspace::projector() const { return matmul(basis_, basis_.adjoint()); }

Vector Subspace::project(std::span<const Complex> x) const {
  if (x.size() != ambient_) throw ShapeError("project: length mismatch");
  Vector out(ambient_);
  for (std::size_t k = 0; k < dim(); ++k) {
    const Vector b = basis_.col(k);
    kernels::axpy(kernels::dotc(b, x), b, out);
  }
  return out;
}

double Subspace::distance(std::span<const Complex> x) const {
  Vector r(x.begin(), x.end());
  const Vector p = project(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= p[i];
  return norm2(r);
}

// ---------------------------------------------------------------------------
// Jacobi SVD

Svd svd(const CMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<Vector> cols(n, Vector(m));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) cols[j][i] = a(i, j);
  std::vector<Vector> vcols(n, Vector(n));
  for (std::size_t j = 0; j < n; ++j) vcols[j][j] = 1.0;

  constexpr double kOrthoEps = 1e-15;
  constexpr int kMaxSweeps = 80;
  std::vector<double> nrm(n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) total += (nrm[j] = kernels::norm_sq(cols[j]));
  // Columns this small relative to ||a||_F are numerically zero; rotating them
  // only accumulates rounding in v.
  const double negligible = 1e-30 * total;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = nrm[p];
        const double beta = nrm[q];
        if (alpha <= negligible || beta <= negligible) continue;
        const Complex gamma = kernels::dotc(cols[p], cols[q]);
        const double g = std::abs(gamma);
        if (g <= kOrthoEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const Complex w = (c * t) * (gamma / g);
        kernels::rotate(cols[p], cols[q], c, w);
        kernels::rotate(vcols[p], vcols[q], c, w);
        nrm[p] = kernels::norm_sq(cols[p]);
        nrm[q] = kernels::norm_sq(cols[q]);
      }
    }
    if (!rotated) break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> sig(n);
  for (std::size_t j = 0; j < n; ++j) sig[j] = std::sqrt(nrm[j]);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sig[x] > sig[y]; });

  Svd out;
  out.sigma.resize(n);
  out.u = CMatrix(m, n);
  out.v = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.sigma[k] = sig[j];
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = vcols[j][i];
    if (sig[j] > 0.0)
      for (std::size_t i = 0; i < m; ++i) out.u(i, k) = cols[j][i] / sig[j];
  }
  return out;
}

namespace {

double rank_threshold(const std::vector<double>& sigma, const Tolerance& tol) {
  const double smax = sigma.empty() ? 0.0 : sigma.front();
  return tol.eps_rank * smax;
}

std::size_t count_above(const std::vector<double>& sigma, double thr, std::size_t cap) {
  std::size_t r = 0;
  for (std::size_t k = 0; k < std::min(cap, sigma.size()); ++k)
    if (sigma[k] > thr) ++r;
  return r;
}

}  // namespace

std::size_t rank(const CMatrix& a, const Tolerance& tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  // Jacobi cost is quadratic in the column count; orient the matrix so the
  // shorter side becomes the columns.
  const Svd s = a.cols() <= a.rows() ? svd(a) : svd(a.adjoint());
  if (s.sigma.empty() || s.sigma.front() == 0.0) return 0;
  return count_above(s.sigma, rank_threshold(s.sigma, tol), std::min(a.rows(), a.cols()));
}

double condition_number(const CMatrix& a) {
  const Svd s = svd(a);
  if (s.sigma.empty()) return 1.0;
  const double smin = s.sigma[std::min(a.rows(), a.cols()) - 1];
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s.sigma.front() / smin;
}

Subspace nullspace(const CMatrix& a, const Tolerance& tol) {
  const std::size_t n = a.cols();
  if (n == 0) return Subspace(0);
  if (a.rows() == 0) return Subspace::full(n);
  const Svd s = svd(a);
  if (s.sigma.front() == 0.0) return Subspace::full(n);
  const double thr = rank_threshold(s.sigma, tol);
  const std::size_t r = count_above(s.sigma, thr, std::min(a.rows(), n));
  return Subspace(n, s.v.block(0, r, n, n - r));
}

Subspace nullspace(const CMatrix& a, const Tolerance& tol, double scale_floor) {
  const std::size_t n = a.cols();
  if (n == 0) return Subspace(0);
  if (a.rows() == 0) return Subspace::full(n);
  const Svd s = svd(a);
  const double thr = tol.eps_rank * std::max(scale_floor, s.sigma.front());
  const std::size_t r = count_above(s.sigma, thr, std::min(a.rows(), n));
  return Subspace(n, s.v.block(0, r, n, n - r));
}

Subspace image(const CMatrix& a, const Tolerance& tol) {
  const std::size_t m = a.rows();
  if (a.cols() == 0 || m == 0) return Subspace(m);
  if (a.cols() > m) {
    // Column space of a equals the orthogonal complement of ker(a^H).
    return complement(nullspace(a.adjoint(), tol), tol);
  }
  const Svd s = svd(a);
  if (s.sigma.front() == 0.0) return Subspace(m);
  const std::size_t r = count_above(s.sigma, rank_threshold(s.sigma, tol), std::min(m, a.cols()));
  return Subspace(m, s.u.block(0, 0, m, r));
}

Subspace span_of(std::span<const Vector> vectors, std::size_t ambient_dim, const Tolerance& tol) {
  if (vectors.empty()) return Subspace(ambient_dim);
  return image(CMatrix::from_columns(vectors, ambient_dim), tol);
}

Subspace intersect(const Subspace& u, const Subspace& v, const Tolerance& tol) {
  if (u.ambient_dim() != v.ambient_dim()) throw ShapeError("intersect: ambient dimension mismatch");
  const std::size_t a = u.ambient_dim();
  if (u.dim() == 0 || v.dim() == 0) return Subspace(a);
  const CMatrix id = CMatrix::identity(a);
  return nullspace(vstack(id - u.projector(), id - v.projector()), tol);
}

Subspace subspace_sum(const Subspace& u, const Subspace& v, const Tolerance& tol) {
  if (u.ambient_dim() != v.ambient_dim()) throw ShapeError("subspace_sum: ambient dimension mismatch");
  if (u.dim() == 0) return v;
  if (v.dim() == 0) return u;
  return image(hstack(u.basis(), v.basis()), tol);
}

Subspace complement(const Subspace& u, const Tolerance& tol) {
  if (u.dim() == 0) return Subspace::full(u.ambient_dim());
  if (u.dim() == u.ambient_dim()) return Subspace(u.ambient_dim());
  return nullspace(u.basis().adjoint(), tol);
}

double span_distance(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim() != v.ambient_dim()) throw ShapeError("span_distance: ambient dimension mismatch");
  double d = 0.0;
  for (std::size_t k = 0; k < u.dim(); ++k) d = std::max(d, v.distance(u.vector(k)));
  for (std::size_t k = 0; k < v.dim(); ++k) d = std::max(d, u.distance(v.vector(k)));
  if (u.dim() != v.dim()) d = std::max(d, 1.0);
  return d;
}

CMatrix solve_least_squares(const CMatrix& a, const CMatrix& b, const Tolerance& tol) {
  if (a.rows() != b.rows()) throw ShapeError("solve_least_squares: row mismatch");
  const Svd s = svd(a);
  const std::size_t n = a.cols();
  CMatrix x(n, b.cols());
  if (s.sigma.empty() || s.sigma.front() == 0.0) return x;
  const double thr = rank_threshold(s.sigma, tol);
  const CMatrix uhb = matmul(s.u.adjoint(), b);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(s.sigma[k] > thr)) continue;
    for (std::size_t j = 0; j < b.cols(); ++j) {
      const Complex coef = uhb(k, j) / s.sigma[k];
      for (std::size_t i = 0; i < n; ++i) x(i, j) += s.v(i, k) * coef;
    }
  }
  return x;
}

CMatrix inverse(const CMatrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("inverse: matrix not square");
  const std::size_t n = a.rows();
  CMatrix lu = a;
  CMatrix inv = CMatrix::identity(n);
  const double scale = std::max(a.max_abs(), std::numeric_limits<double>::min());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
    if (std::abs(lu(piv, k)) <= 1e-14 * scale) throw PreconditionError("inverse: matrix is singular");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(lu(k, j), lu(piv, j));
        std::swap(inv(k, j), inv(piv, j));
      }
    }
    const Complex d = lu(k, k);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const Complex f = lu(i, k) / d;
      if (f == Complex{}) continue;
      kernels::axpy(-f, lu.row_span(k), lu.row_span(i));
      kernels::axpy(-f, inv.row_span(k), inv.row_span(i));
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex d = lu(k, k);
    for (auto& z : inv.row_span(k)) z /= d;
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Hermitian Jacobi eigensolver

HermitianEigen hermitian_eigen(const CMatrix& in) {
  if (in.rows() != in.cols()) throw ShapeError("hermitian_eigen: matrix not square");
  const std::size_t n = in.rows();
  CMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = in(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = in(i, j);
      a(j, i) = std::conj(in(i, j));
    }
  }
  CMatrix v = CMatrix::identity(n);
  const double scale = std::max(a.frobenius(), std::numeric_limits<double>::min());

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-16 * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double g = std::abs(a(p, q));
        if (g <= 1e-300) continue;
        const Complex phase = a(p, q) / g;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex em = std::conj(phase);  // e^{-i phi}
        // J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on (p, q); a <- J^H a J, v <- v J.
        for (std::size_t r = 0; r < n; ++r) {
          const Complex arp = a(r, p), arq = a(r, q);
          a(r, p) = c * arp - s * em * arq;
          a(r, q) = s * arp + c * em * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const Complex apr = a(p, r), aqr = a(q, r);
          a(p, r) = c * apr - s * phase * aqr;
          a(q, r) = s * apr + c * phase * aqr;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          const Complex vrp = v(r, p), vrq = v(r, q);
          v(r, p) = c * vrp - s * em * vrq;
          v(r, q) = s * vrp + c * em * vrq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  HermitianEigen out;
  out.values.resize(n);
  out.vectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

}  // namespace qsym::cnum
