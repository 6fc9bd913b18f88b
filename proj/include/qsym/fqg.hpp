#pragma once

// Finite quantum groups: finite-dimensional Hopf *-algebras with coproduct,
// counit, antipode and Haar state, plus convolution of functionals.

#include <optional>
#include <span>

#include "qsym/grouporacle.hpp"
#include "qsym/staralg.hpp"

namespace qsym::fqg {

using cnum::CMatrix;
using cnum::Complex;
using cnum::Tolerance;
using cnum::Vector;
using staralg::StarAlgebra;
using staralg::StateFunctional;

// Coordinates of a linear functional on A.
using Functional = Vector;

struct FqgReport {
  double delta_hom = 0;
  double coassociativity = 0;
  double counit_law = 0;
  double counit_character = 0;
  double antipode_law = 0;
  double haar_invariance = 0;
  bool haar_state = false;
  std::size_t left_cancellation_rank = 0;
  std::size_t right_cancellation_rank = 0;
  std::size_t dim = 0;

  double worst() const;
  bool ok(const Tolerance& tol) const;
};

class FiniteQuantumGroup {
 public:
  FiniteQuantumGroup() = default;
  // delta has shape dim^2 x dim with row a*dim + b for e_a (x) e_b.
  FiniteQuantumGroup(StarAlgebra alg, CMatrix delta, Functional counit, CMatrix antipode, StateFunctional haar);

  static FiniteQuantumGroup function_algebra(const grouporacle::FiniteGroup& g);
  static FiniteQuantumGroup group_algebra(const grouporacle::FiniteGroup& g);

  const StarAlgebra& alg() const noexcept { return alg_; }
  std::size_t dim() const noexcept { return alg_.dim(); }
  const CMatrix& delta() const noexcept { return delta_; }
  const Functional& counit() const noexcept { return counit_; }
  const CMatrix& antipode() const noexcept { return antipode_; }
  const StateFunctional& haar() const noexcept { return haar_; }

  Vector coproduct(std::span<const Complex> x) const { return cnum::matvec(delta_, x); }
  FqgReport check(const Tolerance& tol) const;
  bool is_cocommutative(const Tolerance& tol) const;

 private:
  StarAlgebra alg_;
  CMatrix delta_;
  Functional counit_;
  CMatrix antipode_;
  StateFunctional haar_;
};

// Applies Delta to the tensor factor at position `slot` of a vector in
// A^{(x) factors}; the result lives in A^{(x) factors+1}.
Vector apply_delta_at(const FiniteQuantumGroup& q, std::span<const Complex> v, std::size_t factors, std::size_t slot);

enum class Nesting { left, right };
// Delta^{(n-1)} : A -> A^{(x) n}; n = 1 is the identity.
CMatrix iterated_coproduct(const FiniteQuantumGroup& q, std::size_t n, Nesting nesting = Nesting::left);

// (w1 (x) w2) o Delta
Functional convolve(const FiniteQuantumGroup& q, std::span<const Complex> w1, std::span<const Complex> w2);
// P_w = (id (x) w) o Delta, so that v * w = v o P_w.
CMatrix convolution_operator(const FiniteQuantumGroup& q, std::span<const Complex> w);

// The unique state h with (id (x) h) Delta = h(.) 1 = (h (x) id) Delta;
// throws ConsistencyError if the invariance equations do not pin it down.
StateFunctional haar_by_invariance(const StarAlgebra& alg, const CMatrix& delta, const Tolerance& tol);

bool is_state(const StarAlgebra& alg, std::span<const Complex> w, const Tolerance& tol);

enum class CesaroMode { doubling, exact };

struct CesaroResult {
  Functional mean;
  std::size_t terms = 0;        // N of the returned C_N (0 in exact mode)
  std::size_t iterations = 0;
  double step_residual = 0;     // ||C_2N - C_N||
  double idempotency = 0;       // ||mean * mean - mean||
};

// C_N = (1/N) sum_{k=1}^N w^{*k} evaluated at N = 1, 2, 4, ... until two
// successive means differ by at most tol; max_iter bounds the doublings.
// Throws PreconditionError if w is not a state and ConvergenceError when
// max_iter is exhausted.
CesaroResult cesaro_mean(const FiniteQuantumGroup& q, std::span<const Complex> w, double tol, std::size_t max_iter,
                         CesaroMode mode = CesaroMode::doubling, const Tolerance& rank_tol = {});

// The dual quantum group on A^* (basis: dual basis of A).
FiniteQuantumGroup dual(const FiniteQuantumGroup& q, const Tolerance& tol = {});

// Characters of a commutative q, with their convolution group. Elements
// are listed as functionals; element 0 is the counit. Empty if q is not
// commutative.
struct CharacterGroup {
  grouporacle::FiniteGroup group;
  std::vector<Functional> characters;
};
std::optional<CharacterGroup> character_group(const FiniteQuantumGroup& q, const Tolerance& tol);
// Group-like elements of a cocommutative q (characters of the dual).
std::optional<grouporacle::FiniteGroup> grouplike_group(const FiniteQuantumGroup& q, const Tolerance& tol);

}  // namespace qsym::fqg
