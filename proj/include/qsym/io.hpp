#pragma once

// JSON formats for algebras, states, groups, quantum groups, homomorphisms,
// families and increasing-sequence reps, and the report envelope written by
// the command-line tool. Indices in every external format are 1-based.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qsym/fqg.hpp"
#include "qsym/grouporacle.hpp"
#include "qsym/hopfimage.hpp"
#include "qsym/qfam.hpp"
#include "qsym/qinc.hpp"
#include "qsym/staralg.hpp"

namespace qsym::io {

using json = nlohmann::json;
using cnum::CMatrix;
using cnum::Complex;
using cnum::Tolerance;
using cnum::Vector;

// All loaders throw ArgumentError on malformed input (including JSON type
// errors), with a message naming the offending key.

// [re, im] or a bare real number.
Complex complex_from_json(const json& j);
json to_json(Complex z);
Vector vector_from_json(const json& j);
json to_json(std::span<const Complex> v);
CMatrix matrix_from_json(const json& j);
json to_json(const CMatrix& m);

// {"blocks":[m_i]}, {"commutative":n}, or {"dim":n,"mult":..,"unit":..,"inv":..}
// where mult[k][l] is the coordinate vector of e_k e_l and inv[k][j] is the
// coefficient of e_k in e_j^*.
staralg::StarAlgebra algebra_from_json(const json& j);
json to_json(const staralg::StarAlgebra& a);

// {"coeffs":[..]} with coeffs[j] = phi(e_j), or {"uniform":true} for the
// normalized trace (block weights m_i^2 / sum m^2).
staralg::StateFunctional state_from_json(const json& j, const staralg::StarAlgebra& a);
json to_json(const staralg::StateFunctional& phi);

// {"cayley":[[..]]} with 1-based entries, {"permutation_generators":[..]}
// holding 1-based image lists or cycle strings (optional "degree"), or one
// of {"cyclic":n}, {"symmetric":n}, {"dihedral":n}.
grouporacle::FiniteGroup group_from_json(const json& j);
json to_json(const grouporacle::FiniteGroup& g);

enum class FqgKind { generic, function_algebra, group_algebra };

struct LoadedFqg {
  fqg::FiniteQuantumGroup q;
  FqgKind kind = FqgKind::generic;
  std::optional<grouporacle::FiniteGroup> group;
};

// {"algebra":..,"delta":[[..]],"counit":[..],"antipode":[[..]],"haar":[..]}
// ("haar" optional, solved by invariance when absent), or the shorthands
// {"function_algebra_of": group} and {"group_algebra_of": group}.
LoadedFqg fqg_from_json(const json& j, const Tolerance& tol = {});
json to_json(const fqg::FiniteQuantumGroup& q);

// A homomorphism out of the algebra of a loaded quantum group. Accepted:
//   {"matrix":[[..]],"target":algebra}
//   {"counit":true} | {"identity":true}
//   {"evaluation": g or [g,..]}        function algebras; g is 1-based or a cycle string
//   {"projections":[P_g,..]}           function algebras; delta_g -> P_g in M_d
//   {"character":[c_g,..]}             group algebras; lambda_g -> c_g
//   {"unitaries":[U_g,..]}             group algebras; lambda_g -> U_g in M_d
//   {"restriction":[h,..]}             function algebras, to C(H)
//   {"dual_quotient":[n,..]}           group algebras, to C*(G/N)
//   {"subgroup":{"fqg":..,"matrix":[[..]]}}
struct LoadedHom {
  staralg::StarHom hom;
  // Present when the map is a quantum-subgroup surjection.
  std::optional<hopfimage::QuantumSubgroup> subgroup;
  // Group-theoretic prediction of the Hopf image dimension, when one exists.
  std::optional<std::size_t> oracle_dim;
  std::string kind;
  // For restriction / dual_quotient: the subgroup's elements (0-based).
  std::vector<grouporacle::Element> elements;
};

LoadedHom hom_from_json(const json& j, const LoadedFqg& q, const Tolerance& tol = {});

// {"source":{"algebra":..,"state":..},"index":{"algebra":..},"coeffs":[[b_ij,..],..]}
// with b_ij in index coordinates and i, j running over a state-orthonormal
// basis of the source; or {"magic_unitary":[[P_ij,..],..]} on C^n with the
// uniform state; or {"permutations":[..],"n":n}.
qfam::QuantumFamily family_from_json(const json& j, const Tolerance& tol = {});
json to_json(const qfam::QuantumFamily& f);

// {"n":4,"k":2,"d":2,"v":[[matrix,..],..]} with v[i][j], i < n, j < k.
qinc::IncreasingSequenceRep rep_from_json(const json& j);
json to_json(const qinc::IncreasingSequenceRep& r);
json to_json(const qinc::MagicUnitaryRep& m);

// Strictly increasing 1-based list.
std::vector<std::size_t> sequence_from_json(const json& j);

// Throws ArgumentError when the file is missing or not valid JSON.
json read_json_file(const std::filesystem::path& path);

std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex_digest(std::uint64_t h);

struct Report {
  std::string command;
  std::string inputs_digest;
  json config = json::object();
  json results = json::object();
  json residuals = json::object();
  bool passed = true;
  int exit_code = 0;
  double wall_time = 0;
};

json to_json(const Report& r);
// Validates the envelope; throws ArgumentError on missing or mistyped keys.
Report report_from_json(const json& j);

}  // namespace qsym::io
