#include "qsym/staralg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qsym/errors.hpp"
#include "test_util.hpp"

using namespace qsym::staralg;
namespace cnum = qsym::cnum;
using qsym::grouporacle::FiniteGroup;
using qsym::testing::random_matrix;

namespace {

const Tolerance kTol{};

StarAlgebra blocks(std::initializer_list<std::size_t> b) {
  const std::vector<std::size_t> v(b);
  return StarAlgebra::from_blocks(v);
}

// phi(x) = sum_b w_b tr(rho_b x_b) with random positive definite rho_b of
// unit trace; tr(rho e_kl) = rho_lk.
StateFunctional random_faithful_state(const StarAlgebra& a, std::mt19937_64& rng) {
  const auto& bl = *a.blocks();
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::vector<double> w(bl.size());
  double total = 0;
  for (auto& x : w) total += (x = u(rng));
  StateFunctional phi{Vector(a.dim())};
  std::size_t off = 0;
  for (std::size_t b = 0; b < bl.size(); ++b) {
    const std::size_t m = bl[b];
    const CMatrix x = random_matrix(rng, m, m);
    CMatrix rho = cnum::matmul(x, x.adjoint()) + 0.5 * CMatrix::identity(m);
    Complex tr = 0;
    for (std::size_t k = 0; k < m; ++k) tr += rho(k, k);
    rho *= w[b] / total / tr;
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = 0; l < m; ++l) phi.coeffs[off + k * m + l] = rho(l, k);
    off += m * m;
  }
  return phi;
}

}  // namespace

TEST(FromBlocks, CommutativeTwoPoint) {
  const StarAlgebra a = blocks({1, 1});
  EXPECT_EQ(a.dim(), 2u);
  EXPECT_TRUE(a.is_commutative(kTol));
  EXPECT_EQ(blocks({1, 1, 1, 1}).dim(), 4u);
}

TEST(FromBlocks, MatrixUnits) {
  const StarAlgebra m2 = blocks({2});
  EXPECT_EQ(m2.dim(), 4u);
  // e_12 e_21 = e_11 in 1-based matrix units: indices 1, 2 -> 0.
  EXPECT_EQ(cnum::max_abs_diff(m2.multiply(m2.basis(1), m2.basis(2)), m2.basis(0)), 0.0);
  EXPECT_EQ(cnum::max_abs_diff(m2.multiply(m2.basis(2), m2.basis(1)), m2.basis(3)), 0.0);
  EXPECT_EQ(cnum::max_abs_diff(m2.star(m2.basis(1)), m2.basis(2)), 0.0);
  EXPECT_FALSE(m2.is_commutative(kTol));
  EXPECT_THROW(StarAlgebra::from_blocks(std::vector<std::size_t>{}), qsym::ArgumentError);
  EXPECT_THROW(blocks({2, 0}), qsym::ArgumentError);
}

TEST(FromBlocks, CenterDimensionIsBlockCount) {
  EXPECT_EQ(blocks({3}).center_dim(kTol), 1u);
  EXPECT_EQ(blocks({1, 2}).center_dim(kTol), 2u);
  EXPECT_EQ(blocks({2, 1, 2}).center_dim(kTol), 3u);
  EXPECT_EQ(blocks({1, 1, 1, 1}).center_dim(kTol), 4u);
}

TEST(FunctionAlgebra, DeltaBasis) {
  const StarAlgebra z2 = StarAlgebra::function_algebra(FiniteGroup::cyclic(2));
  EXPECT_EQ(z2.dim(), 2u);
  const StarAlgebra s3 = StarAlgebra::function_algebra(FiniteGroup::symmetric(3));
  EXPECT_EQ(s3.dim(), 6u);
  for (std::size_t g = 0; g < 6; ++g)
    for (std::size_t h = 0; h < 6; ++h) {
      const Vector expect = g == h ? s3.basis(g) : Vector(6);
      EXPECT_EQ(cnum::max_abs_diff(s3.multiply(s3.basis(g), s3.basis(h)), expect), 0.0);
    }
}

TEST(GroupAlgebra, CenterCountsConjugacyClasses) {
  const StarAlgebra s3 = StarAlgebra::group_algebra(FiniteGroup::symmetric(3));
  EXPECT_FALSE(s3.is_commutative(kTol));
  EXPECT_EQ(s3.center_dim(kTol), 3u);
  EXPECT_TRUE(StarAlgebra::group_algebra(FiniteGroup::cyclic(4)).is_commutative(kTol));
}

TEST(Constructors, AllPassStructureChecks) {
  const StarAlgebra algs[] = {blocks({1}),
                              blocks({2}),
                              blocks({1, 2}),
                              blocks({3, 1}),
                              StarAlgebra::function_algebra(FiniteGroup::dihedral(4)),
                              StarAlgebra::group_algebra(FiniteGroup::symmetric(3)),
                              StarAlgebra::tensor(blocks({2}), blocks({1, 1})),
                              StarAlgebra::direct_sum(blocks({2}), StarAlgebra::group_algebra(FiniteGroup::cyclic(3)))};
  for (const auto& a : algs) EXPECT_TRUE(a.check().ok(kTol)) << "dim " << a.dim();
}

TEST(Constructors, FromStructureRoundTrip) {
  const StarAlgebra a = blocks({1, 2});
  const StarAlgebra b = StarAlgebra::from_mult_matrix(a.mult_matrix(), a.unit(), a.inv_matrix());
  EXPECT_EQ(cnum::max_abs_diff(a.mult_matrix(), b.mult_matrix()), 0.0);
  EXPECT_TRUE(b.check().ok(kTol));
  EXPECT_THROW(StarAlgebra::from_mult_matrix(CMatrix(2, 3), Vector(2), CMatrix(2, 2)), qsym::ShapeError);
}

TEST(Constructors, BrokenStructureIsFlagged) {
  // C^2 with a unit vector that is not the unit.
  const StarAlgebra a = blocks({1, 1});
  const StarAlgebra bad = StarAlgebra::from_mult_matrix(a.mult_matrix(), Vector{1.0, 0.0}, a.inv_matrix());
  EXPECT_NEAR(bad.check().unit, 1.0, 1e-15);
}

TEST(TensorAndSum, Examples) {
  const StarAlgebra c2 = blocks({1, 1});
  const StarAlgebra t = StarAlgebra::tensor(c2, c2);
  EXPECT_EQ(t.dim(), 4u);
  EXPECT_TRUE(t.is_commutative(kTol));
  EXPECT_EQ(t.center_dim(kTol), 4u);
  const StarAlgebra s = StarAlgebra::direct_sum(blocks({2}), blocks({1}));
  EXPECT_EQ(s.dim(), 5u);
  ASSERT_TRUE(s.blocks().has_value());
  EXPECT_EQ(*s.blocks(), (std::vector<std::size_t>{2, 1}));
}

TEST(TensorAndSum, TensorIsAssociativeUnderKronIndexing) {
  const StarAlgebra a = blocks({1, 1});
  const StarAlgebra b = blocks({2});
  const StarAlgebra c = StarAlgebra::group_algebra(FiniteGroup::cyclic(3));
  const StarAlgebra left = StarAlgebra::tensor(StarAlgebra::tensor(a, b), c);
  const StarAlgebra right = StarAlgebra::tensor(a, StarAlgebra::tensor(b, c));
  EXPECT_LE(cnum::max_abs_diff(left.mult_matrix(), right.mult_matrix()), kTol.eps_eq);
  EXPECT_LE(cnum::max_abs_diff(left.inv_matrix(), right.inv_matrix()), kTol.eps_eq);
  EXPECT_LE(cnum::max_abs_diff(left.unit(), right.unit()), kTol.eps_eq);
}

TEST(CheckState, Examples) {
  const StarAlgebra c2 = blocks({1, 1});
  const StateReport u = check_state(c2, uniform_state(2), kTol);
  EXPECT_TRUE(u.unital && u.positive && u.faithful);
  const StateReport p = check_state(c2, {{1.0, 0.0}}, kTol);
  EXPECT_TRUE(p.unital && p.positive);
  EXPECT_FALSE(p.faithful);
  for (double q : {0.1, 0.37, 0.9}) {
    const StateReport r = check_state(c2, {{q, 1.0 - q}}, kTol);
    EXPECT_TRUE(r.faithful);
    // G = diag(q, 1-q)
    EXPECT_NEAR(r.min_eigenvalue, std::min(q, 1.0 - q), 1e-14);
  }
  EXPECT_FALSE(check_state(c2, {{2.0, -1.0}}, kTol).positive);
  EXPECT_FALSE(check_state(c2, {{0.5, 0.6}}, kTol).unital);
}

TEST(Orthonormalize, C2Uniform) {
  const OrthoBasisData d = orthonormalize(blocks({1, 1}), uniform_state(2), kTol);
  const double r2 = std::sqrt(2.0);
  EXPECT_NEAR(std::abs(d.change(0, 0) - r2), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(d.change(1, 1) - r2), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(d.lambda[0] - 1.0 / r2), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(d.lambda[1] - 1.0 / r2), 0.0, 1e-14);
  EXPECT_LE(cnum::max_abs_diff(d.T, CMatrix::identity(2)), 1e-14);
  EXPECT_NEAR(std::abs(d.m_at(0, 0, 0) - r2), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(d.m_at(1, 0, 0)), 0.0, 1e-14);
}

TEST(Orthonormalize, M2NormalizedTrace) {
  const StarAlgebra m2 = blocks({2});
  const double w[] = {1.0};
  const OrthoBasisData d = orthonormalize(m2, block_trace_state(m2, w), kTol);
  EXPECT_LE(cnum::max_abs_diff(d.change, std::sqrt(2.0) * CMatrix::identity(4)), 1e-14);
  // (k,l) -> (l,k): e_11, e_12, e_21, e_22 at 0..3
  const CMatrix swap{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}};
  EXPECT_LE(cnum::max_abs_diff(d.T, swap), 1e-14);
}

TEST(Orthonormalize, RejectsNonFaithful) {
  EXPECT_THROW(orthonormalize(blocks({1, 1}), {{1.0, 0.0}}, kTol), qsym::PreconditionError);
}

TEST(Orthonormalize, StructureDataInvariantsOnRandomStates) {
  std::mt19937_64 rng(21);
  const StarAlgebra algs[] = {blocks({1, 1, 1}), blocks({2}), blocks({1, 2}), blocks({2, 2, 1})};
  for (const auto& a : algs)
    for (int trial = 0; trial < 5; ++trial) {
      const StateFunctional phi = random_faithful_state(a, rng);
      const OrthoBasisData d = orthonormalize(a, phi, kTol);
      const std::size_t n = a.dim();
      // phi(e_i^* e_j) = delta_ij
      const CMatrix g = cnum::matmul(cnum::matmul(d.change.adjoint(), gram(a, phi)), d.change);
      EXPECT_LE(cnum::max_abs_diff(g, CMatrix::identity(n)), 1e-10);
      // sum lambda_i e_i = 1
      EXPECT_LE(cnum::max_abs_diff(cnum::matvec(d.change, d.lambda), a.unit()), kTol.eps_eq);
      // e_k e_l = sum_p m^p_kl e_p as raw vectors
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          Vector rhs(n);
          for (std::size_t p = 0; p < n; ++p)
            for (std::size_t r = 0; r < n; ++r) rhs[r] += d.m_at(p, k, l) * d.change(r, p);
          EXPECT_LE(cnum::max_abs_diff(a.multiply(d.change.col(k), d.change.col(l)), rhs), kTol.eps_eq);
        }
      // ** = id forces T conj(T) = I
      EXPECT_LE(cnum::max_abs_diff(cnum::matmul(d.T, d.T.conj()), CMatrix::identity(n)), kTol.eps_eq);
      EXPECT_GE(d.T_condition, 1.0 - 1e-12);
      EXPECT_TRUE(std::isfinite(d.T_condition));
    }
}

TEST(StarHomCheck, IdentityAndEvaluation) {
  const StarAlgebra s3 = StarAlgebra::function_algebra(FiniteGroup::symmetric(3));
  EXPECT_TRUE(check_star_hom(identity_hom(s3)).ok(kTol));
  const StarAlgebra c = blocks({1});
  for (std::size_t g = 0; g < 6; ++g) {
    CMatrix ev(1, 6);
    ev(0, g) = 1.0;
    EXPECT_TRUE(check_star_hom({s3, c, ev}).ok(kTol));
  }
}

TEST(StarHomCheck, TransposeOnM2IsNotMultiplicative) {
  const StarAlgebra m2 = blocks({2});
  const CMatrix transpose{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}};
  const HomReport r = check_star_hom({m2, m2, transpose});
  EXPECT_LE(r.unital, kTol.eps_eq);
  EXPECT_LE(r.star, kTol.eps_eq);
  // (e12 e21)^T = e11 but e21 e12 = e22
  EXPECT_NEAR(r.multiplicative, 1.0, 1e-15);
  EXPECT_THROW(check_star_hom({m2, m2, CMatrix(3, 4)}), qsym::ShapeError);
}
