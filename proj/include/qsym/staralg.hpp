#pragma once

// Finite-dimensional *-algebras in a fixed basis, faithful states on them,
// the structure data of a state-orthonormal basis, and *-homomorphisms.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qsym/cnum.hpp"
#include "qsym/grouporacle.hpp"

namespace qsym::staralg {

using cnum::CMatrix;
using cnum::Complex;
using cnum::Tolerance;
using cnum::Vector;

struct AlgebraReport {
  double associativity = 0;
  double unit = 0;
  double star_antimultiplicative = 0;
  double star_involutive = 0;

  double worst() const;
  bool ok(const Tolerance& tol) const { return worst() <= tol.eps_eq; }
};

class StarAlgebra {
 public:
  struct Term {
    std::uint32_t index;
    Complex coeff;
  };

  StarAlgebra() = default;

  // mult is indexed [p*n*n + k*n + l]: e_k e_l = sum_p mult[...] e_p.
  // inv(k, j) is the coefficient of e_k in (e_j)^*.
  static StarAlgebra from_structure(std::size_t dim, std::span<const Complex> mult, Vector unit, const CMatrix& inv);
  // mult as a linear map A (x) A -> A, shape dim x dim^2.
  static StarAlgebra from_mult_matrix(const CMatrix& mult, Vector unit, const CMatrix& inv);
  // Direct sum of full matrix algebras in the matrix-unit basis; block i
  // contributes e_kl at offset_i + k*m_i + l.
  static StarAlgebra from_blocks(std::span<const std::size_t> blocks);
  // C^n with the delta-function basis.
  static StarAlgebra commutative(std::size_t n);
  static StarAlgebra function_algebra(const grouporacle::FiniteGroup& g);
  static StarAlgebra group_algebra(const grouporacle::FiniteGroup& g);
  // Basis e_a (x) f_b at index a*b.dim() + b.
  static StarAlgebra tensor(const StarAlgebra& a, const StarAlgebra& b);
  // Basis of a first, then b.
  static StarAlgebra direct_sum(const StarAlgebra& a, const StarAlgebra& b);

  std::size_t dim() const noexcept;
  const std::optional<std::vector<std::size_t>>& blocks() const noexcept;
  std::span<const Term> product(std::size_t k, std::size_t l) const;

  Vector basis(std::size_t k) const;
  const Vector& unit() const noexcept;
  Vector multiply(std::span<const Complex> x, std::span<const Complex> y) const;
  Vector star(std::span<const Complex> x) const;

  // Matrices of y -> x y and y -> y x.
  CMatrix left_mult(std::span<const Complex> x) const;
  CMatrix right_mult(std::span<const Complex> x) const;
  CMatrix mult_matrix() const;
  CMatrix inv_matrix() const;

  AlgebraReport check() const;
  double commutativity_residual() const;
  bool is_commutative(const Tolerance& tol) const { return commutativity_residual() <= tol.eps_eq; }
  std::size_t center_dim(const Tolerance& tol) const;

 private:
  struct Impl;
  explicit StarAlgebra(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

struct StateFunctional {
  Vector coeffs;  // phi(e_j)

  Complex operator()(std::span<const Complex> x) const;
};

// Uniform state on C^n.
StateFunctional uniform_state(std::size_t n);
// sum_i weights_i * tr_i / m_i on a block algebra; weights must sum to 1.
StateFunctional block_trace_state(const StarAlgebra& a, std::span<const double> weights);

// G_ij = phi(e_i^* e_j).
CMatrix gram(const StarAlgebra& a, const StateFunctional& phi);

struct StateReport {
  bool unital = false;
  bool positive = false;
  bool faithful = false;
  double min_eigenvalue = 0;
  double hermitian_residual = 0;
};

StateReport check_state(const StarAlgebra& a, const StateFunctional& phi, const Tolerance& tol);

struct OrthoBasisData {
  CMatrix change;   // column i holds e_i in raw coordinates
  CMatrix to_onb;   // raw coordinates -> ONB coordinates (inverse of change)
  CMatrix m;        // row p, column k*n + l: m^p_{k,l}
  Vector lambda;    // unit = sum_i lambda_i e_i
  CMatrix T;        // e_l^* = sum_k T(k, l) e_k
  Vector phi_e;     // phi(e_i)
  double T_condition = 0;

  Complex m_at(std::size_t p, std::size_t k, std::size_t l) const { return m(p, k * lambda.size() + l); }
};

// Throws PreconditionError if phi is not a faithful state.
OrthoBasisData orthonormalize(const StarAlgebra& a, const StateFunctional& phi, const Tolerance& tol);

struct StarHom {
  StarAlgebra source;
  StarAlgebra target;
  CMatrix matrix;  // target.dim() x source.dim()

  Vector apply(std::span<const Complex> x) const { return cnum::matvec(matrix, x); }
};

struct HomReport {
  double multiplicative = 0;
  double unital = 0;
  double star = 0;

  double worst() const;
  bool ok(const Tolerance& tol) const { return worst() <= tol.eps_eq; }
};

// Throws ShapeError if the matrix does not fit source and target.
HomReport check_star_hom(const StarHom& h);

StarHom identity_hom(const StarAlgebra& a);
// g after f.
StarHom compose(const StarHom& g, const StarHom& f);

}  // namespace qsym::staralg
