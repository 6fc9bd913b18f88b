#include "qsym/fqg.hpp"

#include <gtest/gtest.h>

#include <random>

#include "qsym/errors.hpp"
#include "test_util.hpp"

using namespace qsym::fqg;
namespace cnum = qsym::cnum;
using qsym::grouporacle::Element;
using qsym::grouporacle::FiniteGroup;
using qsym::grouporacle::is_isomorphic;
using qsym::testing::random_vector;

namespace {

const Tolerance kTol{};

std::vector<FiniteGroup> small_groups() {
  return {FiniteGroup::cyclic(2),
          FiniteGroup::cyclic(4),
          FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)),
          FiniteGroup::symmetric(3),
          FiniteGroup::dihedral(4)};
}

Functional point_mass(std::size_t n, std::size_t g) {
  Functional f(n);
  f[g] = 1.0;
  return f;
}

// A random state on C(G): a probability vector.
Functional random_probability(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Functional f(n);
  double s = 0;
  for (auto& c : f) s += (c = u(rng)).real();
  for (auto& c : f) c /= s;
  return f;
}

}  // namespace

TEST(FunctionAlgebra, Z2CoproductIsConvolutionIdentity) {
  const FiniteQuantumGroup q = FiniteQuantumGroup::function_algebra(FiniteGroup::cyclic(2));
  // delta_0 -> d0 (x) d0 + d1 (x) d1, rows a*2+b
  EXPECT_EQ(q.delta().col(0), (Vector{1, 0, 0, 1}));
  EXPECT_EQ(q.delta().col(1), (Vector{0, 1, 1, 0}));
  const FqgReport r = q.check(kTol);
  EXPECT_EQ(r.haar_invariance, 0.0);
  EXPECT_EQ(r.counit_law, 0.0);
  EXPECT_TRUE(r.ok(kTol));
}

TEST(Constructors, AllInvariantsHold) {
  for (const auto& g : small_groups()) {
    const FqgReport f = FiniteQuantumGroup::function_algebra(g).check(kTol);
    EXPECT_TRUE(f.ok(kTol)) << "C(G) order " << g.order() << " worst " << f.worst();
    const FqgReport c = FiniteQuantumGroup::group_algebra(g).check(kTol);
    EXPECT_TRUE(c.ok(kTol)) << "C*(G) order " << g.order() << " worst " << c.worst();
    EXPECT_EQ(c.left_cancellation_rank, g.order() * g.order());
  }
}

TEST(GroupAlgebra, HaarIsDeltaAtIdentity) {
  const FiniteGroup z4 = FiniteGroup::cyclic(4);
  const FiniteQuantumGroup q = FiniteQuantumGroup::group_algebra(z4);
  EXPECT_EQ(q.haar()(q.alg().basis(z4.identity())), Complex(1.0));
  EXPECT_TRUE(q.is_cocommutative(kTol));
  EXPECT_FALSE(FiniteQuantumGroup::function_algebra(FiniteGroup::symmetric(3)).is_cocommutative(kTol));
}

TEST(Check, DetectsBrokenData) {
  const FiniteQuantumGroup q = FiniteQuantumGroup::function_algebra(FiniteGroup::cyclic(3));
  const FiniteQuantumGroup bad_haar(q.alg(), q.delta(), q.counit(), q.antipode(), {{1.0, 0.0, 0.0}});
  EXPECT_GT(bad_haar.check(kTol).haar_invariance, 0.1);
  const FiniteQuantumGroup bad_s(q.alg(), q.delta(), q.counit(), CMatrix::identity(3), q.haar());
  EXPECT_GT(bad_s.check(kTol).antipode_law, 0.1);
  EXPECT_THROW(FiniteQuantumGroup(q.alg(), CMatrix(3, 3), q.counit(), q.antipode(), q.haar()), qsym::ShapeError);
}

TEST(Dual, OfZ2FunctionsIsZ2GroupAlgebra) {
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  const FiniteQuantumGroup d = dual(FiniteQuantumGroup::function_algebra(z2));
  EXPECT_EQ(d.dim(), 2u);
  EXPECT_TRUE(d.alg().is_commutative(kTol));
  // The dual basis of delta functions multiplies like group elements.
  EXPECT_LE(cnum::max_abs_diff(d.alg().mult_matrix(), qsym::staralg::StarAlgebra::group_algebra(z2).mult_matrix()),
            kTol.eps_eq);
  EXPECT_TRUE(d.check(kTol).ok(kTol));
}

TEST(Dual, OfS3FunctionsIsNoncommutative) {
  const FiniteQuantumGroup d = dual(FiniteQuantumGroup::function_algebra(FiniteGroup::symmetric(3)));
  EXPECT_FALSE(d.alg().is_commutative(kTol));
  EXPECT_EQ(d.alg().center_dim(kTol), 3u);  // C + C + M_2
  EXPECT_TRUE(d.check(kTol).ok(kTol));
}

TEST(Dual, BidualityRecoversStructure) {
  for (const auto& g : small_groups())
    for (const auto& q : {FiniteQuantumGroup::function_algebra(g), FiniteQuantumGroup::group_algebra(g)}) {
      const FiniteQuantumGroup dd = dual(dual(q));
      EXPECT_EQ(dd.dim(), q.dim());
      EXPECT_LE(cnum::max_abs_diff(dd.alg().mult_matrix(), q.alg().mult_matrix()), kTol.eps_eq);
      EXPECT_LE(cnum::max_abs_diff(dd.alg().inv_matrix(), q.alg().inv_matrix()), kTol.eps_eq);
      EXPECT_LE(cnum::max_abs_diff(dd.alg().unit(), q.alg().unit()), kTol.eps_eq);
      EXPECT_LE(cnum::max_abs_diff(dd.delta(), q.delta()), kTol.eps_eq);
      EXPECT_LE(cnum::max_abs_diff(dd.counit(), q.counit()), kTol.eps_eq);
      EXPECT_LE(cnum::max_abs_diff(dd.antipode(), q.antipode()), kTol.eps_eq);
      EXPECT_LE(cnum::max_abs_diff(dd.haar().coeffs, q.haar().coeffs), kTol.eps_eq);
    }
}

TEST(IteratedCoproduct, SmallCasesAndNesting) {
  const FiniteQuantumGroup q = dual(FiniteQuantumGroup::function_algebra(FiniteGroup::symmetric(3)));
  EXPECT_EQ(cnum::max_abs_diff(iterated_coproduct(q, 1), CMatrix::identity(6)), 0.0);
  EXPECT_EQ(cnum::max_abs_diff(iterated_coproduct(q, 2), q.delta()), 0.0);
  for (std::size_t n : {3, 4})
    EXPECT_LE(cnum::max_abs_diff(iterated_coproduct(q, n, Nesting::left), iterated_coproduct(q, n, Nesting::right)),
              kTol.eps_eq);
  EXPECT_THROW(iterated_coproduct(q, 0), qsym::ArgumentError);
}

TEST(IteratedCoproduct, ClassicalIsMultiplicationOfPoints) {
  const FiniteGroup s3 = FiniteGroup::symmetric(3);
  const CMatrix d3 = iterated_coproduct(FiniteQuantumGroup::function_algebra(s3), 3);
  for (Element a = 0; a < 6; ++a)
    for (Element b = 0; b < 6; ++b)
      for (Element c = 0; c < 6; ++c)
        for (Element g = 0; g < 6; ++g)
          EXPECT_EQ(d3((a * 6 + b) * 6 + c, g), s3.mul(s3.mul(a, b), c) == g ? Complex(1) : Complex(0));
}

TEST(Convolve, Examples) {
  std::mt19937_64 rng(1);
  for (const auto& g : small_groups()) {
    const FiniteQuantumGroup q = FiniteQuantumGroup::function_algebra(g);
    const std::size_t n = g.order();
    const Functional w = random_vector(rng, n);
    EXPECT_LE(cnum::max_abs_diff(convolve(q, q.counit(), w), w), kTol.eps_eq);
    EXPECT_LE(cnum::max_abs_diff(convolve(q, w, q.counit()), w), kTol.eps_eq);
    EXPECT_LE(cnum::max_abs_diff(convolve(q, q.haar().coeffs, q.haar().coeffs), q.haar().coeffs), kTol.eps_eq);
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b)
        EXPECT_EQ(cnum::max_abs_diff(convolve(q, point_mass(n, a), point_mass(n, b)), point_mass(n, g.mul(a, b))), 0.0);
  }
}

TEST(Convolve, AssociativeAndHaarAbsorbs) {
  std::mt19937_64 rng(2);
  const FiniteQuantumGroup qs[] = {dual(FiniteQuantumGroup::function_algebra(FiniteGroup::symmetric(3))),
                                   FiniteQuantumGroup::function_algebra(FiniteGroup::dihedral(4))};
  for (const auto& q : qs) {
    const std::size_t n = q.dim();
    const Functional& h = q.haar().coeffs;
    for (int trial = 0; trial < 5; ++trial) {
      const Functional a = random_vector(rng, n), b = random_vector(rng, n), c = random_vector(rng, n);
      EXPECT_LE(cnum::max_abs_diff(convolve(q, convolve(q, a, b), c), convolve(q, a, convolve(q, b, c))), 1e-9);
      Complex a1 = 0;
      for (std::size_t k = 0; k < n; ++k) a1 += a[k] * q.alg().unit()[k];
      Functional a1h = h;
      for (auto& x : a1h) x *= a1;
      EXPECT_LE(cnum::max_abs_diff(convolve(q, h, a), a1h), kTol.eps_eq);
      EXPECT_LE(cnum::max_abs_diff(convolve(q, a, h), a1h), kTol.eps_eq);
    }
  }
}

TEST(HaarByInvariance, MatchesKnownHaar) {
  for (const auto& g : small_groups()) {
    const FiniteQuantumGroup q = FiniteQuantumGroup::group_algebra(g);
    EXPECT_LE(cnum::max_abs_diff(haar_by_invariance(q.alg(), q.delta(), kTol).coeffs, q.haar().coeffs), kTol.eps_eq);
  }
}

TEST(Cesaro, HaarAndCounitAreFixed) {
  const FiniteQuantumGroup q = FiniteQuantumGroup::function_algebra(FiniteGroup::symmetric(3));
  const CesaroResult h = cesaro_mean(q, q.haar().coeffs, 1e-10, 100);
  EXPECT_LE(cnum::max_abs_diff(h.mean, q.haar().coeffs), 1e-12);
  EXPECT_EQ(h.iterations, 1u);
  const CesaroResult e = cesaro_mean(q, q.counit(), 1e-10, 100);
  EXPECT_LE(cnum::max_abs_diff(e.mean, q.counit()), 1e-12);
}

TEST(Cesaro, AlternatingPointMassOnZ2AveragesToHaar) {
  const FiniteQuantumGroup q = FiniteQuantumGroup::function_algebra(FiniteGroup::cyclic(2));
  const CesaroResult r = cesaro_mean(q, point_mass(2, 1), 1e-10, 100);
  EXPECT_LE(cnum::max_abs_diff(r.mean, Functional{0.5, 0.5}), 1e-12);
  EXPECT_LE(r.idempotency, 1e-9);
}

TEST(Cesaro, DoublingAgreesWithExactProjection) {
  std::mt19937_64 rng(3);
  for (const auto& g : small_groups()) {
    const FiniteQuantumGroup q = FiniteQuantumGroup::function_algebra(g);
    for (Element x = 0; x < g.order(); ++x) {
      const CesaroResult it = cesaro_mean(q, point_mass(g.order(), x), 1e-9, 200);
      const CesaroResult ex = cesaro_mean(q, point_mass(g.order(), x), 1e-9, 200, CesaroMode::exact);
      EXPECT_LE(cnum::max_abs_diff(it.mean, ex.mean), 1e-8);
      EXPECT_LE(it.idempotency, 1e-8);
      EXPECT_LE(ex.idempotency, 1e-10);
      // uniform on the cyclic subgroup <x>
      const std::size_t ord = g.element_order(x);
      Functional expect(g.order());
      for (Element y = g.identity(), k = 0; k < ord; ++k, y = g.mul(y, x)) expect[y] = 1.0 / static_cast<double>(ord);
      EXPECT_LE(cnum::max_abs_diff(ex.mean, expect), 1e-10);
    }
    const Functional w = random_probability(rng, g.order());
    EXPECT_LE(cnum::max_abs_diff(cesaro_mean(q, w, 1e-10, 200).mean,
                                 cesaro_mean(q, w, 1e-10, 200, CesaroMode::exact).mean),
              1e-8);
  }
}

TEST(Cesaro, Errors) {
  const FiniteQuantumGroup q = FiniteQuantumGroup::function_algebra(FiniteGroup::cyclic(3));
  try {
    cesaro_mean(q, point_mass(3, 1), 1e-12, 2);
    FAIL() << "expected ConvergenceError";
  } catch (const qsym::ConvergenceError& e) {
    EXPECT_GT(e.residual(), 1e-12);
  }
  EXPECT_THROW(cesaro_mean(q, Functional{2.0, -1.0, 0.0}, 1e-9, 10), qsym::PreconditionError);
  EXPECT_THROW(cesaro_mean(q, q.counit(), 0.0, 10), qsym::ArgumentError);
}

TEST(Characters, RecoverClassicalGroups) {
  for (const auto& g : small_groups()) {
    const auto c = character_group(FiniteQuantumGroup::function_algebra(g), kTol);
    ASSERT_TRUE(c.has_value());
    EXPECT_TRUE(is_isomorphic(c->group, g));
    const auto gl = grouplike_group(FiniteQuantumGroup::group_algebra(g), kTol);
    ASSERT_TRUE(gl.has_value());
    EXPECT_TRUE(is_isomorphic(*gl, g));
  }
  const FiniteQuantumGroup s3 = FiniteQuantumGroup::function_algebra(FiniteGroup::symmetric(3));
  EXPECT_FALSE(character_group(dual(s3), kTol).has_value());
  EXPECT_FALSE(grouplike_group(s3, kTol).has_value());
}
