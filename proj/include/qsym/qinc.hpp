#pragma once

// Quantum increasing sequences: representations of the universal algebra
// generated by v_ij (i <= n, j <= k), their completion to magic unitaries,
// and growth diagnostics for the families they define.

#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qsym/cnum.hpp"
#include "qsym/grouporacle.hpp"
#include "qsym/qfam.hpp"

namespace qsym::qinc {

using cnum::CMatrix;
using cnum::Tolerance;

// Indices are 0-based internally; entry (i, j) sits at v[i*k + j].
struct IncreasingSequenceRep {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t d = 0;
  std::vector<CMatrix> v;

  const CMatrix& at(std::size_t i, std::size_t j) const { return v[i * k + j]; }
  CMatrix& at(std::size_t i, std::size_t j) { return v[i * k + j]; }
};

struct MagicUnitaryRep {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<CMatrix> p;  // p[i*n + j]

  const CMatrix& at(std::size_t i, std::size_t j) const { return p[i * n + j]; }
};

struct ValidationReport {
  double projection = 0;    // v^2 = v = v^*
  double column_sums = 0;   // sum_i v_ij = 1
  double orthogonality = 0; // v_ij v_i'j' = 0 for j < j', i >= i'
  double vanishing = 0;     // v_ij = 0 unless j <= i <= n-k+j
  // 1-based (i, j) of the worst entry per family, for messages
  std::string worst_relation;

  double worst() const;
  bool ok(const Tolerance& tol) const { return worst() <= tol.eps_eq; }
};

// Throws ShapeError if the array does not hold n*k square d x d matrices.
ValidationReport validate(const IncreasingSequenceRep& rep);

// Residual of the magic-unitary conditions (projections, row and column sums).
double magic_residual(const MagicUnitaryRep& m);

// seq is 1-based and strictly increasing with values in 1..n; throws
// ArgumentError otherwise.
IncreasingSequenceRep classical_rep(std::span<const std::size_t> seq, std::size_t n);

// All strictly increasing 1-based sequences of length k in 1..n, lexicographic.
std::vector<std::vector<std::size_t>> increasing_sequences(std::size_t k, std::size_t n);
std::vector<IncreasingSequenceRep> enumerate(std::size_t k, std::size_t n);

// Throws PreconditionError for an invalid rep and ConsistencyError if the
// output fails the magic-unitary check by more than 10 eps_eq.
MagicUnitaryRep complete(const IncreasingSequenceRep& rep, const Tolerance& tol = {});

// The permutation s with p_ij = [s(j) = i] for a scalar 0/1 magic unitary.
std::optional<grouporacle::Permutation> as_permutation(const MagicUnitaryRep& m, const Tolerance& tol = {});

// The family x -> sum_i e_i (x) p_ij on C^n defined by a completed rep.
qfam::QuantumFamily completion_family(const IncreasingSequenceRep& rep, const Tolerance& tol = {});

struct S4Check {
  std::vector<grouporacle::Permutation> completed;  // one per sequence, in enumeration order
  std::size_t order = 0;
  bool is_S4 = false;
};

// Completes the six classical reps for k = 2, n = 4 and closes them under
// composition; drop_identity removes the identity from the generators.
S4Check s4_generation_check(bool drop_identity = false);

// v11 = 1 - p1 - p2, v21 = p1, v31 = p2, v22 = q1, v32 = q2, v42 = 1 - q1 - q2.
// Throws PreconditionError naming the first violated relation.
IncreasingSequenceRep free_pair_rep(const CMatrix& p1, const CMatrix& p2, const CMatrix& q1, const CMatrix& q2,
                                    const Tolerance& tol = {});

// d = 2, q1 = p2 = 0, p1 = [[1,0],[0,0]], q2 = [[t,s],[s,1-t]] with
// s = sqrt(t(1-t)), everything conjugated by u (identity when empty).
struct FreePair {
  double t = 0;
  CMatrix p1, p2, q1, q2;
  IncreasingSequenceRep rep;
};
FreePair tilted_free_pair(double t, const CMatrix& u = {});
// t uniform in (0,1) and u a random unitary.
FreePair random_free_pair(std::mt19937_64& rng);

struct GrowthOptions {
  std::size_t degree_cap = 8;
  std::size_t dim_cap = 4096;
};

struct GrowthResult {
  std::vector<std::size_t> dims;  // m = 1..N
  std::vector<bool> truncated;    // a cap was hit before the span closed
  std::size_t degree_cap = 0;
  std::size_t dim_cap = 0;
};

// For m = 1..N, the dimension of the unital algebra generated by the
// coefficients of the m-fold composition of the completed family, inside
// M_d^{(x) m}. Throws PreconditionError for an invalid rep.
GrowthResult coefficient_growth(const IncreasingSequenceRep& rep, std::size_t N, const GrowthOptions& opt = {},
                                const Tolerance& tol = {});

}  // namespace qsym::qinc
