#pragma once

// Dense complex linear algebra: matrices, Kronecker products and the
// rank-revealing machinery (Jacobi SVD, Hermitian eigensolver) behind every
// kernel and subspace computation in the library.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qsym::cnum {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

struct Tolerance {
  double eps_eq = 1e-9;    // entrywise equality
  double eps_rank = 1e-8;  // relative singular-value threshold for rank decisions

  // Throws ArgumentError unless both thresholds are strictly positive.
  void validate() const;
};

// Row-major dense complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix from_columns(std::span<const Vector> columns, std::size_t rows);
  static CMatrix column(std::span<const Complex> v);
  static CMatrix row(std::span<const Complex> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Complex> row_span(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Complex> row_span(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<const Complex> entries() const noexcept { return data_; }

  Vector col(std::size_t j) const;
  void set_col(std::size_t j, std::span<const Complex> v);

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix conj() const;
  CMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(Complex s);

  double max_abs() const noexcept;
  double frobenius() const noexcept;
  bool all_finite() const noexcept;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(Complex s, CMatrix a);

// Throws ShapeError when a.cols() != b.rows().
CMatrix matmul(const CMatrix& a, const CMatrix& b);
Vector matvec(const CMatrix& a, std::span<const Complex> x);
// x^T a, i.e. a functional composed with a map.
Vector vecmat(std::span<const Complex> x, const CMatrix& a);

// Index convention (i,k),(j,l) -> (i*b.rows()+k, j*b.cols()+l).
CMatrix kron(const CMatrix& a, const CMatrix& b);
Vector kron(std::span<const Complex> a, std::span<const Complex> b);

CMatrix hstack(const CMatrix& a, const CMatrix& b);
CMatrix vstack(const CMatrix& a, const CMatrix& b);

double max_abs_diff(const CMatrix& a, const CMatrix& b);
double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b);
double norm2(std::span<const Complex> v);
double max_abs(std::span<const Complex> v);

// Orthonormal basis of a subspace of C^ambient_dim, stored as columns.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient_dim);  // zero subspace
  // Columns must already be orthonormal.
  Subspace(std::size_t ambient_dim, CMatrix basis);

  static Subspace full(std::size_t ambient_dim);

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return basis_.cols(); }
  const CMatrix& basis() const noexcept { return basis_; }
  Vector vector(std::size_t k) const { return basis_.col(k); }

  CMatrix projector() const;
  // ||x - P x||
  double distance(std::span<const Complex> x) const;
  Vector project(std::span<const Complex> x) const;

 private:
  std::size_t ambient_ = 0;
  CMatrix basis_;
};

struct Svd {
  std::vector<double> sigma;  // descending, length min(rows, cols) padded to cols
  CMatrix u;                  // rows x cols; columns are left singular vectors (zero for sigma = 0)
  CMatrix v;                  // cols x cols unitary
};

// One-sided Jacobi SVD of a (any shape).
Svd svd(const CMatrix& a);

std::size_t rank(const CMatrix& a, const Tolerance& tol);
double condition_number(const CMatrix& a);

// Orthonormal basis of {x : ||a x|| <= eps_rank * ||a|| * ||x||}.
Subspace nullspace(const CMatrix& a, const Tolerance& tol);
// Same with the threshold eps_rank * max(scale_floor, ||a||), for matrices
// that may legitimately vanish.
Subspace nullspace(const CMatrix& a, const Tolerance& tol, double scale_floor);
// Orthonormal basis of the column space.
Subspace image(const CMatrix& a, const Tolerance& tol);
Subspace span_of(std::span<const Vector> vectors, std::size_t ambient_dim, const Tolerance& tol);

// Both throw ShapeError on ambient mismatch.
Subspace intersect(const Subspace& u, const Subspace& v, const Tolerance& tol);
Subspace subspace_sum(const Subspace& u, const Subspace& v, const Tolerance& tol);
// Orthogonal complement in the ambient space.
Subspace complement(const Subspace& u, const Tolerance& tol);

// Mutual projection residual max(||(I-P_v) P_u||, ||(I-P_u) P_v||); zero iff equal spans.
double span_distance(const Subspace& u, const Subspace& v);

// Minimum-norm least-squares solution of a x = b (b may have several columns).
CMatrix solve_least_squares(const CMatrix& a, const CMatrix& b, const Tolerance& tol);

// LU with partial pivoting; throws PreconditionError if a is singular.
CMatrix inverse(const CMatrix& a);

struct HermitianEigen {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // columns
};

// Cyclic Jacobi; a must be Hermitian (the strictly lower part is ignored).
HermitianEigen hermitian_eigen(const CMatrix& a);

}  // namespace qsym::cnum
