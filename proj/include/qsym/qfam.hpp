#pragma once

// Quantum families of maps beta: M -> M (x) B on a finite quantum space
// (M, phi), stored by their coefficient matrix b in a phi-orthonormal basis:
// beta(e_j) = sum_i e_i (x) b_ij.

#include <array>
#include <span>
#include <vector>

#include "qsym/grouporacle.hpp"
#include "qsym/staralg.hpp"

namespace qsym::qfam {

using cnum::CMatrix;
using cnum::Complex;
using cnum::Tolerance;
using cnum::Vector;
using staralg::StarAlgebra;
using staralg::StateFunctional;

// Residual tolerances grow by this factor per level of composition.
inline constexpr double kCompositionSlack = 10.0;

struct SourceSpace {
  StarAlgebra alg;
  StateFunctional phi;
  staralg::OrthoBasisData onb;

  std::size_t dim() const noexcept { return alg.dim(); }
};

// Orthonormalizes; throws PreconditionError for a non-faithful state.
SourceSpace make_source(const StarAlgebra& alg, const StateFunctional& phi, const Tolerance& tol);
// C^n with the uniform state; the ONB is e_i = sqrt(n) delta_i.
SourceSpace uniform_source(std::size_t n, const Tolerance& tol);

class QuantumFamily {
 public:
  // coeffs has n*n entries, coeffs[i*n + j] = b_ij as a vector in index.
  QuantumFamily(SourceSpace source, StarAlgebra index, std::vector<Vector> coeffs, int depth = 0);

  const SourceSpace& source() const noexcept { return source_; }
  const StarAlgebra& index() const noexcept { return index_; }
  std::size_t n() const noexcept { return source_.dim(); }
  const Vector& b(std::size_t i, std::size_t j) const { return coeffs_[i * n() + j]; }
  const std::vector<Vector>& coeffs() const noexcept { return coeffs_; }
  // Number of compositions that produced this family.
  int depth() const noexcept { return depth_; }

  // The linear map M -> M (x) B in ONB coordinates, shape (n*dimB) x n.
  CMatrix onb_matrix() const;
  // Same map in the raw basis of M.
  CMatrix raw_matrix() const;
  // Applies beta to x given in raw coordinates of M; result in raw (x) B.
  Vector apply_raw(std::span<const Complex> x) const;

 private:
  SourceSpace source_;
  StarAlgebra index_;
  std::vector<Vector> coeffs_;
  int depth_ = 0;
};

// Builds a family from a linear map given in raw coordinates of M, shape
// (n*dimB) x n with row i*dimB + r.
QuantumFamily from_raw_map(const SourceSpace& source, const StarAlgebra& index, const CMatrix& raw);

double check_wang1(const QuantumFamily& f);

struct Wang2Result {
  double residual = 0;
  std::array<std::size_t, 3> witness{};  // (p, i, j) with the largest defect, 0-based
};
Wang2Result check_wang2(const QuantumFamily& f);

double check_wang3(const QuantumFamily& f);
double check_wang4(const QuantumFamily& f);
double check_unitary(const QuantumFamily& f);

struct PodlesResult {
  std::size_t rank = 0;
  bool full = false;
};
PodlesResult check_podles(const QuantumFamily& f, const Tolerance& tol);

struct FamilyCheckReport {
  double wang1 = 0;
  double wang2 = 0;
  std::array<std::size_t, 3> wang2_witness{};
  double wang3 = 0;
  double wang4 = 0;
  double unitary = 0;
  std::size_t podles_rank = 0;
  bool podles_full = false;
  bool state_preserved = false;
  double tolerance_used = 0;

  bool is_star_hom() const;
  bool all_pass() const;
};

// Thresholds are eps_eq scaled by kCompositionSlack per composition level.
FamilyCheckReport check_family(const QuantumFamily& f, const Tolerance& tol);
double family_tolerance(const QuantumFamily& f, const Tolerance& tol);

// f then g in the composition sense (f (x) id) o g; index algebra B (x) C
// with b''_ij = sum_k b_ik (x) c_kj. Throws ArgumentError on source mismatch.
QuantumFamily compose(const QuantumFamily& f, const QuantumFamily& g);
QuantumFamily iterate(const QuantumFamily& f, std::size_t times);

// b_ij = delta_ij 1_B.
QuantumFamily trivial_family(const SourceSpace& source, const StarAlgebra& index);

// Classical family of permutations s of {0..n-1} on C^n, indexed by
// C(perms): b_ij(s) = [s(i) = j].
QuantumFamily permutation_family(std::span<const grouporacle::Permutation> perms, const Tolerance& tol);

// Residual of the magic-unitary conditions for n*n blocks p[i*n+j] of size d.
double magic_unitary_residual(std::span<const CMatrix> p, std::size_t n);

// Family on C^n with index algebra M_d: b_ij = p_ij in matrix-unit
// coordinates. Throws PreconditionError if p is not a magic unitary.
QuantumFamily family_from_magic_unitary(std::span<const CMatrix> p, std::size_t n, const Tolerance& tol);

// M_d coordinates of a d x d matrix and back.
Vector matrix_to_coords(const CMatrix& m);
CMatrix coords_to_matrix(std::span<const Complex> v, std::size_t d);

}  // namespace qsym::qfam
