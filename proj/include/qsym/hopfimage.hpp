#pragma once

// Hopf images of *-homomorphisms out of a finite quantum group, quantum
// subgroups generated by families of subgroups, inner faithfulness, and the
// quantum group generated by a quantum family living under a finite host.

#include <optional>
#include <string>
#include <vector>

#include "qsym/fqg.hpp"
#include "qsym/qfam.hpp"

namespace qsym::hopfimage {

using cnum::CMatrix;
using cnum::Subspace;
using cnum::Tolerance;
using fqg::FiniteQuantumGroup;
using staralg::StarAlgebra;
using staralg::StarHom;
using staralg::StateFunctional;

enum class Method { kernel, coideal, both };

std::string to_string(Method m);
// Throws ArgumentError for anything but "kernel", "coideal" or "both".
Method method_from_string(const std::string& s);

struct HopfImageOptions {
  Method method = Method::coideal;
  std::size_t window = 3;      // kernel method: stop after this many stable depths
  std::size_t max_depth = 64;  // kernel method: give up (ConvergenceError) beyond this
  Tolerance tol{};
};

struct HopfImageResiduals {
  double ideal = 0;        // A J A inside J
  double coideal = 0;      // (pi (x) pi) Delta (J)
  double counit = 0;       // eps(J)
  double factorization = 0;  // theta o pi - L
  double quotient = 0;     // worst invariant of the quotient quantum group

  double worst() const;
};

struct HopfImageResult {
  Subspace J;
  FiniteQuantumGroup quotient;
  StarHom pi;
  StarHom theta;
  std::size_t n_stabilized = 0;
  Method method = Method::coideal;
  // dim S from each algorithm, filled for Method::both.
  std::optional<std::size_t> kernel_dim;
  std::optional<std::size_t> coideal_dim;
  HopfImageResiduals residuals;

  std::size_t dim() const { return quotient.dim(); }
};

// (L (x) ... (x) L) o Delta^{(n-1)} with target B^{(x) n}.
StarHom lambda_n(const FiniteQuantumGroup& q, const StarHom& L, std::size_t n);

// Throws PreconditionError if L is not a unital *-homomorphism out of q's
// algebra and ConsistencyError if the two methods disagree under `both`.
HopfImageResult hopf_image(const FiniteQuantumGroup& q, const StarHom& L, const HopfImageOptions& opt = {});

// Largest subspace of ker L that is an ideal and a coideal, together with the
// number of refinement rounds that were needed.
struct KernelSearch {
  Subspace J;
  std::size_t depth = 0;
};
KernelSearch coideal_fixed_point(const FiniteQuantumGroup& q, const StarHom& L, const Tolerance& tol);
KernelSearch kernel_intersection(const FiniteQuantumGroup& q, const StarHom& L, std::size_t window,
                                 std::size_t max_depth, const Tolerance& tol);

// Quotient of q by a Hopf ideal J, with basis the orthogonal complement of J
// under the Haar inner product. pi has shape dim(A/J) x dim A.
struct Quotient {
  FiniteQuantumGroup group;
  StarHom pi;
  CMatrix section;  // dim A x dim(A/J): the complement basis, pi o section = id
};
Quotient quotient_by(const FiniteQuantumGroup& q, const Subspace& J, const Tolerance& tol);

// A quantum subgroup H of q, given by a surjective morphism C(G) -> C(H).
struct QuantumSubgroup {
  FiniteQuantumGroup group;
  StarHom map;
};

// Restriction C(G) -> C(H) along a subgroup of a finite group.
QuantumSubgroup restriction_subgroup(const grouporacle::FiniteGroup& g, std::span<const grouporacle::Element> members);

// The dual quantum subgroup C*(G) -> C*(G/N) for a normal subgroup N.
QuantumSubgroup dual_quotient_subgroup(const grouporacle::FiniteGroup& g, std::span<const grouporacle::Element> normal);

struct GeneratedSubgroup {
  HopfImageResult image;
  std::vector<StarHom> theta_parts;  // S -> C(H_i)
  std::vector<double> theta_morphism_residuals;
  std::vector<bool> theta_surjective;
};

// Throws PreconditionError unless every map is a surjective morphism of
// quantum groups, and ArgumentError on an empty list.
GeneratedSubgroup generated_subgroup(const FiniteQuantumGroup& q, std::span<const QuantumSubgroup> subgroups,
                                     const HopfImageOptions& opt = {});

// Residual of (pi (x) pi) Delta_A - Delta_B pi.
double morphism_residual(const FiniteQuantumGroup& a, const FiniteQuantumGroup& b, const CMatrix& pi);

// Distance below which the Cesaro limit counts as the Haar state.
inline constexpr double kInnerFaithfulThreshold = 1e-6;

struct InnerFaithfulResult {
  bool inner_faithful = false;
  double haar_distance = 0;  // ||omega~ - h||
  std::size_t cesaro_iterations = 0;
  double idempotency = 0;
  std::size_t hopf_image_dim = 0;
  bool agrees_with_hopf_image = false;
};

// omega = phi_B o L. Throws PreconditionError if phi_B is not faithful and
// ConvergenceError if the Cesaro means do not settle.
InnerFaithfulResult inner_faithful(const FiniteQuantumGroup& q, const StarHom& L, const StateFunctional& phi_B,
                                   double cesaro_tol = 1e-10, std::size_t max_iter = 60, const Tolerance& tol = {});

// Dimension of the smallest unital *-subalgebra of the dual containing the
// images of the transposed subgroup maps and stable under both slice maps
// of the dual coproduct.
std::size_t dual_generated_dim(const FiniteQuantumGroup& q, std::span<const QuantumSubgroup> subgroups,
                               const Tolerance& tol = {});

struct FamilyImage {
  HopfImageResult image;
  StarHom lambda;          // C(host) -> index algebra of the family
  qfam::QuantumFamily reduced;  // (id (x) pi) o action
  double factorization = 0;     // || b_ij - theta(reduced b_ij) ||
};

// Throws PreconditionError if `action` is not a state-preserving Podles
// family over q_host's algebra, and ArgumentError if f does not factor
// through it by a *-homomorphism.
FamilyImage generated_from_family(const qfam::QuantumFamily& f, const FiniteQuantumGroup& q_host,
                                  const qfam::QuantumFamily& action, const HopfImageOptions& opt = {});

// Decides isomorphism for quantum groups that are commutative (characters)
// or cocommutative (group-likes); nullopt otherwise.
std::optional<bool> group_derived_isomorphic(const FiniteQuantumGroup& a, const FiniteQuantumGroup& b,
                                             const Tolerance& tol = {});

}  // namespace qsym::hopfimage
