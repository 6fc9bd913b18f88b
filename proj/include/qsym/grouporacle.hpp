#pragma once

// Brute-force finite group machinery. Everything here is exhaustive search
// over Cayley tables, used as ground truth for the quantum-group algorithms.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qsym::grouporacle {

using Element = std::uint32_t;

// Bound on group orders for the normal-subgroup and isomorphism searches.
inline constexpr std::size_t kDefaultOrderBound = 24;
// Bound on closure() output; the Cayley table is order^2.
inline constexpr std::size_t kClosureBound = 720;

// Bijection of {0, ..., degree-1}. Product convention: (a * b)(x) = a(b(x)).
class Permutation {
 public:
  Permutation() = default;
  // Throws ArgumentError unless images is a bijection.
  explicit Permutation(std::vector<Element> images);

  static Permutation identity(std::size_t degree);
  // Parses 1-based cycle notation "(1 2)(3 4)"; "()" or "" is the identity.
  static Permutation from_cycles(std::string_view cycles, std::size_t degree);

  std::size_t degree() const noexcept { return images_.size(); }
  Element operator()(Element x) const { return images_[x]; }
  const std::vector<Element>& images() const noexcept { return images_; }

  Permutation inverse() const;
  std::size_t order() const;
  bool is_identity() const noexcept;
  // 1-based cycle notation, fixed points omitted; identity prints as "()".
  std::string to_cycles() const;

  friend Permutation operator*(const Permutation& a, const Permutation& b);
  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Element> images_;
};

class FiniteGroup {
 public:
  FiniteGroup() = default;
  // Validates associativity, identity and inverses; throws ArgumentError.
  FiniteGroup(std::vector<std::vector<Element>> cayley);

  std::size_t order() const noexcept { return order_; }
  Element identity() const noexcept { return identity_; }
  Element mul(Element a, Element b) const { return table_[a * order_ + b]; }
  Element inverse(Element a) const { return inverse_[a]; }
  std::size_t element_order(Element a) const;
  std::vector<std::vector<Element>> cayley() const;

  // Present when the group was built from permutations.
  const std::optional<std::vector<Permutation>>& permutations() const noexcept { return perms_; }
  // Index of a permutation among the elements; throws ArgumentError if absent.
  Element index_of(const Permutation& p) const;

  bool is_abelian() const;

  static FiniteGroup cyclic(std::size_t n);
  static FiniteGroup symmetric(std::size_t n);
  // Symmetries of the regular n-gon acting on n points (order 2n).
  static FiniteGroup dihedral(std::size_t n);
  static FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);
  static FiniteGroup from_permutations(std::vector<Permutation> elements);

 private:
  std::size_t order_ = 0;
  Element identity_ = 0;
  std::vector<Element> table_;
  std::vector<Element> inverse_;
  std::optional<std::vector<Permutation>> perms_;
};

// Sorted element indices of a subgroup of some ambient FiniteGroup.
using Subgroup = std::vector<Element>;

// Breadth-first product closure. Throws ArgumentError on mixed degrees and
// BoundError past kClosureBound elements.
FiniteGroup closure(std::span<const Permutation> generators, std::size_t degree);

bool is_subgroup(const FiniteGroup& g, const Subgroup& s);
bool is_normal(const FiniteGroup& g, const Subgroup& s);

Subgroup subgroup_generated(const FiniteGroup& g, std::span<const Element> generators);
Subgroup subgroup_generated(const FiniteGroup& g, std::span<const Subgroup> subsets);
Subgroup normal_closure(const FiniteGroup& g, std::span<const Element> generators);
Subgroup intersect_subgroups(const Subgroup& a, const Subgroup& b);

// All normal subgroups, sorted by order then lexicographically. Throws
// BoundError when g.order() > bound.
std::vector<Subgroup> normal_subgroups(const FiniteGroup& g, std::size_t bound = kDefaultOrderBound);

struct Quotient {
  FiniteGroup group;
  std::vector<Element> coset_of;  // ambient element -> quotient element
};

// Throws PreconditionError unless s is a normal subgroup.
Quotient quotient(const FiniteGroup& g, const Subgroup& s);

struct Embedded {
  FiniteGroup group;
  std::vector<Element> embedding;  // subgroup element -> ambient element
};

Embedded subgroup_as_group(const FiniteGroup& g, const Subgroup& s);

// Exhaustive generator-image search with element-order pruning.
bool is_isomorphic(const FiniteGroup& a, const FiniteGroup& b, std::size_t bound = kDefaultOrderBound);

}  // namespace qsym::grouporacle
