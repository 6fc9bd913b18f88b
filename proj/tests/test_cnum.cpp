#include "qsym/cnum.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qsym/errors.hpp"
#include "qsym/kernels.hpp"
#include "test_util.hpp"

using namespace qsym::cnum;
using qsym::testing::random_matrix;
using qsym::testing::random_vector;

namespace {
const Tolerance kTol{};
}

TEST(CMatrix, IdentityTimesX) {
  std::mt19937_64 rng(1);
  const CMatrix x = random_matrix(rng, 2, 2);
  EXPECT_EQ(max_abs_diff(matmul(CMatrix::identity(2), x), x), 0.0);
}

TEST(CMatrix, SwapSquaresToIdentity) {
  const CMatrix s{{0, 1}, {1, 0}};
  EXPECT_EQ(max_abs_diff(matmul(s, s), CMatrix::identity(2)), 0.0);
}

TEST(CMatrix, AdjointOfProduct) {
  std::mt19937_64 rng(2);
  const CMatrix a = random_matrix(rng, 5, 5);
  const CMatrix b = random_matrix(rng, 5, 5);
  EXPECT_LE(max_abs_diff(matmul(a, b).adjoint(), matmul(b.adjoint(), a.adjoint())), kTol.eps_eq);
}

TEST(CMatrix, MatmulShapeError) {
  EXPECT_THROW(matmul(CMatrix(2, 3), CMatrix(2, 3)), qsym::ShapeError);
  EXPECT_THROW(CMatrix(2, 2, std::vector<Complex>(3)), qsym::ShapeError);
}

TEST(Kron, IdentityTensorIdentity) {
  EXPECT_EQ(max_abs_diff(kron(CMatrix::identity(2), CMatrix::identity(3)), CMatrix::identity(6)), 0.0);
}

TEST(Kron, MatrixUnitPosition) {
  CMatrix e11(2, 2), e22(2, 2);
  e11(1, 1) = 1.0;  // e1 e1^T with 0-based index 1
  e22(1, 1) = 1.0;
  const CMatrix k = kron(e11, e22);
  CMatrix expect(4, 4);
  expect(3, 3) = 1.0;
  EXPECT_EQ(max_abs_diff(k, expect), 0.0);
}

TEST(Kron, MixedProductLaw) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix a = random_matrix(rng, 2, 3), c = random_matrix(rng, 3, 2);
    const CMatrix b = random_matrix(rng, 3, 4), d = random_matrix(rng, 4, 3);
    EXPECT_LE(max_abs_diff(matmul(kron(a, b), kron(c, d)), kron(matmul(a, c), matmul(b, d))), kTol.eps_eq);
  }
}

TEST(Nullspace, ZeroMatrixIsEverything) { EXPECT_EQ(nullspace(CMatrix(3, 3), kTol).dim(), 3u); }

TEST(Nullspace, IdentityHasNone) { EXPECT_EQ(nullspace(CMatrix::identity(3), kTol).dim(), 0u); }

TEST(Nullspace, AllOnes2x2) {
  const Subspace n = nullspace(CMatrix{{1, 1}, {1, 1}}, kTol);
  ASSERT_EQ(n.dim(), 1u);
  // Hand elimination: x1 + x2 = 0, so span{(1,-1)/sqrt 2}.
  const Vector expect = {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)};
  EXPECT_LE(n.distance(expect), 1e-12);
  EXPECT_NEAR(norm2(n.vector(0)), 1.0, 1e-12);
}

TEST(Nullspace, ResidualAndRankNullityOnRandomDeficientMatrices) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t r = 1 + trial % 5;
    const std::size_t rows = 7, cols = 9;
    const CMatrix a = matmul(random_matrix(rng, rows, r), random_matrix(rng, r, cols));
    const Subspace n = nullspace(a, kTol);
    EXPECT_EQ(rank(a, kTol) + n.dim(), cols);
    EXPECT_EQ(n.dim(), cols - r);
    const double anorm = svd(a).sigma.front();
    for (std::size_t k = 0; k < n.dim(); ++k) EXPECT_LE(norm2(matvec(a, n.vector(k))), kTol.eps_rank * anorm);
    // orthonormal basis
    EXPECT_LE(max_abs_diff(matmul(n.basis().adjoint(), n.basis()), CMatrix::identity(n.dim())), 1e-12);
  }
}

TEST(Svd, ReconstructsMatrix) {
  std::mt19937_64 rng(5);
  for (auto [m, n] : {std::pair{6, 4}, std::pair{4, 6}, std::pair{5, 5}}) {
    const CMatrix a = random_matrix(rng, m, n);
    const Svd s = svd(a);
    CMatrix sig(n, n);
    for (int k = 0; k < n; ++k) sig(k, k) = s.sigma[k];
    EXPECT_LE(max_abs_diff(matmul(matmul(s.u, sig), s.v.adjoint()), a), 1e-11);
    for (std::size_t k = 1; k < s.sigma.size(); ++k) EXPECT_GE(s.sigma[k - 1], s.sigma[k]);
  }
}

TEST(Svd, ScalarAndVectorKernelsAgree) {
  std::mt19937_64 rng(6);
  const CMatrix a = random_matrix(rng, 17, 11);
  const auto prev = qsym::kernels::set_active_isa(qsym::kernels::Isa::scalar);
  const Svd ref = svd(a);
  qsym::kernels::set_active_isa(qsym::kernels::Isa::avx2);
  const Svd vec = svd(a);
  qsym::kernels::set_active_isa(prev);
  for (std::size_t k = 0; k < ref.sigma.size(); ++k) EXPECT_NEAR(ref.sigma[k], vec.sigma[k], 1e-11);
}

namespace {
Subspace coordinate_span(std::size_t ambient, std::initializer_list<std::size_t> idx) {
  std::vector<Vector> vs;
  for (auto i : idx) {
    Vector v(ambient);
    v[i] = 1.0;
    vs.push_back(v);
  }
  return span_of(vs, ambient, kTol);
}
}  // namespace

TEST(Intersect, WithItself) {
  std::mt19937_64 rng(7);
  const Subspace u = image(random_matrix(rng, 6, 3), kTol);
  const Subspace w = intersect(u, u, kTol);
  EXPECT_EQ(w.dim(), 3u);
  EXPECT_LE(span_distance(u, w), kTol.eps_eq);
}

TEST(Intersect, CoordinatePlanes) {
  const Subspace w = intersect(coordinate_span(3, {0, 1}), coordinate_span(3, {1, 2}), kTol);
  ASSERT_EQ(w.dim(), 1u);
  EXPECT_LE(span_distance(w, coordinate_span(3, {1})), kTol.eps_eq);
}

TEST(Intersect, RecoversPlantedVector) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector w = random_vector(rng, 6);
    std::vector<Vector> uv = {w, random_vector(rng, 6), random_vector(rng, 6)};
    std::vector<Vector> vv = {w, random_vector(rng, 6)};
    const Subspace u = span_of(uv, 6, kTol), v = span_of(vv, 6, kTol);
    const Subspace x = intersect(u, v, kTol);
    ASSERT_EQ(x.dim(), 1u);
    EXPECT_LE(x.distance(w) / norm2(w), kTol.eps_eq);
    // commutative and idempotent up to span equality
    EXPECT_LE(span_distance(x, intersect(v, u, kTol)), kTol.eps_eq);
    EXPECT_LE(span_distance(intersect(x, x, kTol), x), kTol.eps_eq);
    EXPECT_LE(x.dim(), std::min(u.dim(), v.dim()));
  }
}

TEST(Intersect, AmbientMismatch) {
  EXPECT_THROW(intersect(Subspace::full(2), Subspace::full(3), kTol), qsym::ShapeError);
}

TEST(SubspaceOps, SumComplementImage) {
  const Subspace s = subspace_sum(coordinate_span(4, {0}), coordinate_span(4, {1, 2}), kTol);
  EXPECT_EQ(s.dim(), 3u);
  const Subspace c = complement(s, kTol);
  ASSERT_EQ(c.dim(), 1u);
  EXPECT_LE(span_distance(c, coordinate_span(4, {3})), kTol.eps_eq);
  // wide matrix goes through the complement-of-kernel path
  std::mt19937_64 rng(9);
  const CMatrix wide = matmul(random_matrix(rng, 5, 2), random_matrix(rng, 2, 8));
  EXPECT_EQ(image(wide, kTol).dim(), 2u);
}

TEST(LeastSquares, RecoversSolutionAndMinimumNorm) {
  std::mt19937_64 rng(10);
  const CMatrix a = random_matrix(rng, 8, 4);
  const CMatrix x = random_matrix(rng, 4, 2);
  EXPECT_LE(max_abs_diff(solve_least_squares(a, matmul(a, x), kTol), x), 1e-10);
  // underdetermined: minimum-norm solution is orthogonal to the kernel
  const CMatrix w = random_matrix(rng, 2, 5);
  const CMatrix b = random_matrix(rng, 2, 1);
  const CMatrix sol = solve_least_squares(w, b, kTol);
  EXPECT_LE(max_abs_diff(matmul(w, sol), b), 1e-10);
  const Subspace ker = nullspace(w, kTol);
  EXPECT_LE(norm2(ker.project(sol.col(0))), 1e-10);
}

TEST(Inverse, RandomAndSingular) {
  std::mt19937_64 rng(11);
  const CMatrix a = random_matrix(rng, 6, 6);
  EXPECT_LE(max_abs_diff(matmul(a, inverse(a)), CMatrix::identity(6)), 1e-10);
  EXPECT_THROW(inverse(CMatrix{{1, 2}, {2, 4}}), qsym::PreconditionError);
}

TEST(HermitianEigen, DiagonalizesRandomHermitian) {
  std::mt19937_64 rng(12);
  const CMatrix b = random_matrix(rng, 7, 7);
  const CMatrix h = b + b.adjoint();
  const HermitianEigen e = hermitian_eigen(h);
  CMatrix d(7, 7);
  for (int k = 0; k < 7; ++k) d(k, k) = e.values[k];
  EXPECT_LE(max_abs_diff(matmul(matmul(e.vectors, d), e.vectors.adjoint()), h), 1e-10);
  EXPECT_LE(max_abs_diff(matmul(e.vectors.adjoint(), e.vectors), CMatrix::identity(7)), 1e-12);
  for (int k = 1; k < 7; ++k) EXPECT_LE(e.values[k - 1], e.values[k]);
}

TEST(HermitianEigen, IndefiniteSigns) {
  const HermitianEigen e = hermitian_eigen(CMatrix{{0, Complex(0, 1)}, {Complex(0, -1), 0}});
  EXPECT_NEAR(e.values[0], -1.0, 1e-14);
  EXPECT_NEAR(e.values[1], 1.0, 1e-14);
}

TEST(ToleranceConfig, RejectsNonPositive) {
  EXPECT_NO_THROW(Tolerance{}.validate());
  EXPECT_THROW((Tolerance{0.0, 1e-8}.validate()), qsym::ArgumentError);
  EXPECT_THROW((Tolerance{1e-9, -1.0}.validate()), qsym::ArgumentError);
}

TEST(Nullspace, ScaleFloorKeepsRoundingNoiseInTheKernel) {
  CMatrix tiny{{1e-17, -2e-17, 0.0}, {0.0, 3e-17, 1e-17}};
  EXPECT_EQ(nullspace(tiny, Tolerance{}, 1.0).dim(), 3u);
  EXPECT_LT(nullspace(tiny, Tolerance{}).dim(), 3u);
  CMatrix a{{1.0, 0.0, 0.0}, {0.0, 1e-3, 0.0}};
  EXPECT_EQ(nullspace(a, Tolerance{}, 1.0).dim(), 1u);
}
