#include "qsym/grouporacle.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "qsym/errors.hpp"

using namespace qsym::grouporacle;

namespace {

// Independent oracle: every subset that is closed under products and
// conjugation. Only usable for tiny groups.
std::set<Subgroup> normal_subgroups_by_subsets(const FiniteGroup& g) {
  std::set<Subgroup> out;
  const std::size_t n = g.order();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    Subgroup s;
    for (Element x = 0; x < n; ++x)
      if (mask & (1u << x)) s.push_back(x);
    bool ok = (mask >> g.identity()) & 1u;
    for (Element a : s)
      for (Element b : s) ok = ok && ((mask >> g.mul(a, b)) & 1u);
    for (Element x = 0; x < n && ok; ++x)
      for (Element a : s) ok = ok && ((mask >> g.mul(g.mul(x, a), g.inverse(x))) & 1u);
    if (ok) out.insert(s);
  }
  return out;
}

std::size_t factorial(std::size_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

void expect_group_axioms(const FiniteGroup& g) {
  for (Element a = 0; a < g.order(); ++a) {
    EXPECT_EQ(g.mul(a, g.identity()), a);
    EXPECT_EQ(g.mul(g.identity(), a), a);
    EXPECT_EQ(g.mul(a, g.inverse(a)), g.identity());
    for (Element b = 0; b < g.order(); ++b)
      for (Element c = 0; c < g.order(); ++c) EXPECT_EQ(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
  }
}

}  // namespace

TEST(Permutation, CycleRoundTripAndProduct) {
  const auto a = Permutation::from_cycles("(1 2)", 3);
  const auto b = Permutation::from_cycles("(2 3)", 3);
  EXPECT_EQ(a.to_cycles(), "(1 2)");
  // (a*b)(x) = a(b(x)): 0 -> 0 -> 1, 1 -> 2 -> 2, 2 -> 1 -> 0
  EXPECT_EQ((a * b).images(), (std::vector<Element>{1, 2, 0}));
  EXPECT_EQ((a * b).to_cycles(), "(1 2 3)");
  EXPECT_EQ((a * b).order(), 3u);
  EXPECT_TRUE((a * a).is_identity());
  EXPECT_EQ(Permutation::from_cycles("()", 4), Permutation::identity(4));
  EXPECT_EQ(Permutation::from_cycles("(1,3)(2 4)", 4).images(), (std::vector<Element>{2, 3, 0, 1}));
}

TEST(Permutation, RejectsBadInput) {
  EXPECT_THROW(Permutation({0, 0}), qsym::ArgumentError);
  EXPECT_THROW(Permutation::from_cycles("(1 5)", 4), qsym::ArgumentError);
  EXPECT_THROW(Permutation::from_cycles("(1 2)(2 3)", 4), qsym::ArgumentError);
  EXPECT_THROW(Permutation::from_cycles("(1 2", 4), qsym::ArgumentError);
}

TEST(Closure, SingleTranspositionHasOrderTwo) {
  const Permutation gens[] = {Permutation({1, 0})};
  EXPECT_EQ(closure(gens, 2).order(), 2u);
}

TEST(Closure, TranspositionAndThreeCycleGiveS3) {
  const Permutation gens[] = {Permutation({1, 0, 2}), Permutation({1, 2, 0})};
  const FiniteGroup g = closure(gens, 3);
  EXPECT_EQ(g.order(), 6u);
  expect_group_axioms(g);
  EXPECT_FALSE(g.is_abelian());
}

TEST(Closure, LagrangeOnSymmetricAmbient) {
  for (std::size_t deg = 2; deg <= 5; ++deg) {
    const Permutation gens[] = {Permutation::from_cycles("(1 2)", deg)};
    EXPECT_EQ(factorial(deg) % closure(gens, deg).order(), 0u);
  }
  const FiniteGroup d4 = FiniteGroup::dihedral(4);
  EXPECT_EQ(d4.order(), 8u);
  EXPECT_EQ(factorial(4) % d4.order(), 0u);
  expect_group_axioms(d4);
}

TEST(Closure, DegreeMismatchAndBound) {
  const Permutation bad[] = {Permutation({1, 0}), Permutation({1, 2, 0})};
  EXPECT_THROW(closure(bad, 3), qsym::ArgumentError);
  EXPECT_THROW(FiniteGroup::symmetric(7), qsym::BoundError);
}

TEST(NormalSubgroups, Z4HasThree) {
  const FiniteGroup z4 = FiniteGroup::cyclic(4);
  const auto ns = normal_subgroups(z4);
  ASSERT_EQ(ns.size(), 3u);
  EXPECT_EQ(ns[0], Subgroup({0}));
  EXPECT_EQ(ns[1], Subgroup({0, 2}));
  EXPECT_EQ(ns[2], Subgroup({0, 1, 2, 3}));
}

TEST(NormalSubgroups, S3HasTrivialA3AndItself) {
  const FiniteGroup s3 = FiniteGroup::symmetric(3);
  const auto ns = normal_subgroups(s3);
  ASSERT_EQ(ns.size(), 3u);
  EXPECT_EQ(ns[1].size(), 3u);
  for (Element x : ns[1]) EXPECT_EQ(s3.element_order(x) % 3 == 0 || x == s3.identity(), true);
}

TEST(NormalSubgroups, MatchSubsetOracle) {
  const FiniteGroup groups[] = {FiniteGroup::cyclic(4), FiniteGroup::cyclic(6),
                                FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)),
                                FiniteGroup::symmetric(3), FiniteGroup::dihedral(4)};
  for (const auto& g : groups) {
    const auto ns = normal_subgroups(g);
    EXPECT_EQ(std::set<Subgroup>(ns.begin(), ns.end()), normal_subgroups_by_subsets(g));
  }
}

TEST(NormalSubgroups, AbelianMeansEverySubgroupNormal) {
  const FiniteGroup g = FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(4));
  // Every cyclic subgroup must show up, since all subgroups are normal.
  const auto ns = normal_subgroups(g);
  const std::set<Subgroup> all(ns.begin(), ns.end());
  for (Element x = 0; x < g.order(); ++x) {
    const Element gen[] = {x};
    EXPECT_TRUE(all.count(subgroup_generated(g, gen)));
  }
  EXPECT_THROW(normal_subgroups(FiniteGroup::symmetric(5)), qsym::BoundError);
}

TEST(Quotient, Z4ModTwoIsZ2) {
  const FiniteGroup z4 = FiniteGroup::cyclic(4);
  const Quotient q = quotient(z4, {0, 2});
  EXPECT_EQ(q.group.order(), 2u);
  EXPECT_TRUE(is_isomorphic(q.group, FiniteGroup::cyclic(2)));
  EXPECT_EQ(q.coset_of[0], q.coset_of[2]);
  EXPECT_NE(q.coset_of[0], q.coset_of[1]);
}

TEST(Quotient, OrderTimesSubgroupOrder) {
  const FiniteGroup groups[] = {FiniteGroup::cyclic(6), FiniteGroup::symmetric(3), FiniteGroup::dihedral(4),
                                FiniteGroup::symmetric(4)};
  for (const auto& g : groups)
    for (const auto& s : normal_subgroups(g)) EXPECT_EQ(quotient(g, s).group.order() * s.size(), g.order());
  const FiniteGroup s3 = FiniteGroup::symmetric(3);
  const Element t = s3.index_of(Permutation::from_cycles("(1 2)", 3));
  const Element gen[] = {t};
  EXPECT_THROW(quotient(s3, subgroup_generated(s3, gen)), qsym::PreconditionError);
}

TEST(SubgroupOps, IntersectAndGenerate) {
  EXPECT_EQ(intersect_subgroups({0, 2}, {0}), Subgroup({0}));
  const FiniteGroup s3 = FiniteGroup::symmetric(3);
  const Subgroup a = {s3.identity(), s3.index_of(Permutation::from_cycles("(1 2)", 3))};
  const Subgroup b = {s3.identity(), s3.index_of(Permutation::from_cycles("(1 3)", 3))};
  const Subgroup both[] = {a, b};
  EXPECT_EQ(subgroup_generated(s3, both).size(), 6u);
  const Embedded e = subgroup_as_group(s3, a);
  EXPECT_EQ(e.group.order(), 2u);
  ASSERT_TRUE(e.group.permutations().has_value());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ((*e.group.permutations())[i], (*s3.permutations())[a[i]]);
}

TEST(Isomorphism, Examples) {
  const FiniteGroup z2 = FiniteGroup::cyclic(2), z3 = FiniteGroup::cyclic(3);
  EXPECT_FALSE(is_isomorphic(FiniteGroup::cyclic(4), FiniteGroup::direct_product(z2, z2)));
  EXPECT_TRUE(is_isomorphic(FiniteGroup::cyclic(6), FiniteGroup::direct_product(z2, z3)));
  EXPECT_FALSE(is_isomorphic(FiniteGroup::cyclic(6), FiniteGroup::symmetric(3)));
  const FiniteGroup groups[] = {FiniteGroup::symmetric(3), FiniteGroup::dihedral(4), FiniteGroup::symmetric(4)};
  for (const auto& g : groups) EXPECT_TRUE(is_isomorphic(g, g));
  EXPECT_THROW(is_isomorphic(FiniteGroup::symmetric(5), FiniteGroup::symmetric(5)), qsym::BoundError);
}

TEST(Isomorphism, RelabelledCayleyTable) {
  const FiniteGroup d4 = FiniteGroup::dihedral(4);
  std::vector<Element> relabel = {3, 7, 1, 0, 5, 2, 6, 4};
  std::vector<Element> back(8);
  for (Element i = 0; i < 8; ++i) back[relabel[i]] = i;
  std::vector<std::vector<Element>> t(8, std::vector<Element>(8));
  for (Element a = 0; a < 8; ++a)
    for (Element b = 0; b < 8; ++b) t[relabel[a]][relabel[b]] = relabel[d4.mul(a, b)];
  EXPECT_TRUE(is_isomorphic(d4, FiniteGroup(t)));
  EXPECT_FALSE(is_isomorphic(d4, FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(4))));
}

TEST(FiniteGroup, RejectsNonGroupTables) {
  EXPECT_THROW(FiniteGroup({{0, 1}, {1, 1}}), qsym::ArgumentError);
  EXPECT_THROW(FiniteGroup({{0, 1}, {1}}), qsym::ArgumentError);
}
