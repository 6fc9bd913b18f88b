#include "qsym/qfam.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsym/errors.hpp"

namespace qsym::qfam {

namespace {

void axpy(Complex a, std::span<const Complex> x, Vector& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

double dist(std::span<const Complex> a, std::span<const Complex> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

bool same_source(const SourceSpace& a, const SourceSpace& b) {
  if (a.dim() != b.dim()) return false;
  return cnum::max_abs_diff(a.onb.change, b.onb.change) <= 1e-12 &&
         cnum::max_abs_diff(a.alg.mult_matrix(), b.alg.mult_matrix()) <= 1e-12 &&
         cnum::max_abs_diff(a.phi.coeffs, b.phi.coeffs) <= 1e-12;
}

}  // namespace

SourceSpace make_source(const StarAlgebra& alg, const StateFunctional& phi, const Tolerance& tol) {
  return {alg, phi, staralg::orthonormalize(alg, phi, tol)};
}

SourceSpace uniform_source(std::size_t n, const Tolerance& tol) {
  return make_source(StarAlgebra::commutative(n), staralg::uniform_state(n), tol);
}

QuantumFamily::QuantumFamily(SourceSpace source, StarAlgebra index, std::vector<Vector> coeffs, int depth)
    : source_(std::move(source)), index_(std::move(index)), coeffs_(std::move(coeffs)), depth_(depth) {
  const std::size_t n = source_.dim();
  if (coeffs_.size() != n * n)
    throw ShapeError("family needs " + std::to_string(n * n) + " coefficients, got " + std::to_string(coeffs_.size()));
  for (const auto& c : coeffs_) {
    if (c.size() != index_.dim()) throw ShapeError("coefficient length differs from index algebra dimension");
    for (const auto& z : c)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ArgumentError("non-finite family coefficient");
  }
}

CMatrix QuantumFamily::onb_matrix() const {
  const std::size_t nn = n(), db = index_.dim();
  CMatrix o(nn * db, nn);
  for (std::size_t i = 0; i < nn; ++i)
    for (std::size_t j = 0; j < nn; ++j)
      for (std::size_t r = 0; r < db; ++r) o(i * db + r, j) = b(i, j)[r];
  return o;
}

CMatrix QuantumFamily::raw_matrix() const {
  const CMatrix lift = cnum::kron(source_.onb.change, CMatrix::identity(index_.dim()));
  return cnum::matmul(cnum::matmul(lift, onb_matrix()), source_.onb.to_onb);
}

Vector QuantumFamily::apply_raw(std::span<const Complex> x) const { return cnum::matvec(raw_matrix(), x); }

QuantumFamily from_raw_map(const SourceSpace& source, const StarAlgebra& index, const CMatrix& raw) {
  const std::size_t n = source.dim(), db = index.dim();
  if (raw.rows() != n * db || raw.cols() != n) throw ShapeError("raw family map has the wrong shape");
  const CMatrix o =
      cnum::matmul(cnum::matmul(cnum::kron(source.onb.to_onb, CMatrix::identity(db)), raw), source.onb.change);
  std::vector<Vector> coeffs(n * n, Vector(db));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t r = 0; r < db; ++r) coeffs[i * n + j][r] = o(i * db + r, j);
  return QuantumFamily(source, index, std::move(coeffs));
}

double check_wang1(const QuantumFamily& f) {
  const std::size_t n = f.n();
  const Vector& phi_e = f.source().onb.phi_e;
  const Vector& one = f.index().unit();
  double worst = 0;
  for (std::size_t j = 0; j < n; ++j) {
    Vector lhs(one.size());
    for (std::size_t i = 0; i < n; ++i) axpy(phi_e[i], f.b(i, j), lhs);
    Vector rhs(one.size());
    axpy(phi_e[j], one, rhs);
    worst = std::max(worst, dist(lhs, rhs));
  }
  return worst;
}

Wang2Result check_wang2(const QuantumFamily& f) {
  const std::size_t n = f.n(), db = f.index().dim();
  const CMatrix& m = f.source().onb.m;
  std::vector<Vector> lhs(n * n * n, Vector(db));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      std::vector<std::pair<std::size_t, Complex>> nz;
      for (std::size_t p = 0; p < n; ++p)
        if (std::abs(m(p, k * n + l)) > 1e-15) nz.emplace_back(p, m(p, k * n + l));
      if (nz.empty()) continue;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const Vector prod = f.index().multiply(f.b(k, i), f.b(l, j));
          for (const auto& [p, c] : nz) axpy(c, prod, lhs[(p * n + i) * n + j]);
        }
    }
  Wang2Result r;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Vector rhs(db);
        for (std::size_t q = 0; q < n; ++q) axpy(m(q, i * n + j), f.b(p, q), rhs);
        const double d = dist(lhs[(p * n + i) * n + j], rhs);
        if (d > r.residual) {
          r.residual = d;
          r.witness = {p, i, j};
        }
      }
  return r;
}

double check_wang3(const QuantumFamily& f) {
  const std::size_t n = f.n();
  const Vector& lambda = f.source().onb.lambda;
  const Vector& one = f.index().unit();
  double worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Vector lhs(one.size()), rhs(one.size());
    for (std::size_t j = 0; j < n; ++j) axpy(lambda[j], f.b(i, j), lhs);
    axpy(lambda[i], one, rhs);
    worst = std::max(worst, dist(lhs, rhs));
  }
  return worst;
}

double check_wang4(const QuantumFamily& f) {
  const std::size_t n = f.n(), db = f.index().dim();
  const CMatrix& t = f.source().onb.T;
  std::vector<Vector> bstar(n * n);
  for (std::size_t i = 0; i < n * n; ++i) bstar[i] = f.index().star(f.coeffs()[i]);
  double worst = 0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) {
      Vector lhs(db), rhs(db);
      for (std::size_t l = 0; l < n; ++l) {
        axpy(t(k, l), bstar[l * n + j], lhs);
        axpy(t(l, j), f.b(k, l), rhs);
      }
      worst = std::max(worst, dist(lhs, rhs));
    }
  return worst;
}

double check_unitary(const QuantumFamily& f) {
  const std::size_t n = f.n(), db = f.index().dim();
  const StarAlgebra& b = f.index();
  std::vector<Vector> bstar(n * n);
  for (std::size_t i = 0; i < n * n; ++i) bstar[i] = b.star(f.coeffs()[i]);
  double left = 0, right = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Vector bb(db), bbs(db);
      for (std::size_t k = 0; k < n; ++k) {
        axpy(1.0, b.multiply(bstar[k * n + i], f.b(k, j)), bb);
        axpy(1.0, b.multiply(f.b(i, k), bstar[j * n + k]), bbs);
      }
      if (i == j) {
        axpy(-1.0, b.unit(), bb);
        axpy(-1.0, b.unit(), bbs);
      }
      left = std::max(left, cnum::norm2(bb));
      right = std::max(right, cnum::norm2(bbs));
    }
  return left + right;
}

PodlesResult check_podles(const QuantumFamily& f, const Tolerance& tol) {
  const std::size_t n = f.n(), db = f.index().dim();
  CMatrix span(n * db, n * db);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < db; ++k) {
      const std::size_t col = j * db + k;
      for (std::size_t i = 0; i < n; ++i) {
        const Vector& bij = f.b(i, j);
        for (std::size_t l = 0; l < db; ++l) {
          if (bij[l] == 0.0) continue;
          for (const auto& t : f.index().product(l, k)) span(i * db + t.index, col) += bij[l] * t.coeff;
        }
      }
    }
  PodlesResult r;
  r.rank = cnum::rank(span, tol);
  r.full = r.rank == n * db;
  return r;
}

bool FamilyCheckReport::is_star_hom() const {
  return wang2 <= tolerance_used && wang3 <= tolerance_used && wang4 <= tolerance_used;
}

bool FamilyCheckReport::all_pass() const {
  return wang1 <= tolerance_used && is_star_hom() && unitary <= tolerance_used && podles_full;
}

double family_tolerance(const QuantumFamily& f, const Tolerance& tol) {
  return tol.eps_eq * std::pow(kCompositionSlack, f.depth());
}

FamilyCheckReport check_family(const QuantumFamily& f, const Tolerance& tol) {
  FamilyCheckReport r;
  r.tolerance_used = family_tolerance(f, tol);
  r.wang1 = check_wang1(f);
  const Wang2Result w2 = check_wang2(f);
  r.wang2 = w2.residual;
  r.wang2_witness = w2.witness;
  r.wang3 = check_wang3(f);
  r.wang4 = check_wang4(f);
  r.unitary = check_unitary(f);
  const PodlesResult p = check_podles(f, tol);
  r.podles_rank = p.rank;
  r.podles_full = p.full;
  r.state_preserved = r.wang1 <= r.tolerance_used;
  return r;
}

QuantumFamily compose(const QuantumFamily& f, const QuantumFamily& g) {
  if (!same_source(f.source(), g.source())) throw ArgumentError("compose: families act on different sources");
  const std::size_t n = f.n();
  const StarAlgebra index = StarAlgebra::tensor(f.index(), g.index());
  std::vector<Vector> coeffs(n * n, Vector(index.dim()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) axpy(1.0, cnum::kron(f.b(i, k), g.b(k, j)), coeffs[i * n + j]);
  return QuantumFamily(f.source(), index, std::move(coeffs), std::max(f.depth(), g.depth()) + 1);
}

QuantumFamily iterate(const QuantumFamily& f, std::size_t times) {
  if (times == 0) throw ArgumentError("iterate needs at least one factor");
  QuantumFamily out = f;
  for (std::size_t t = 1; t < times; ++t) out = compose(out, f);
  return out;
}

QuantumFamily trivial_family(const SourceSpace& source, const StarAlgebra& index) {
  const std::size_t n = source.dim();
  std::vector<Vector> coeffs(n * n, Vector(index.dim()));
  for (std::size_t i = 0; i < n; ++i) coeffs[i * n + i] = index.unit();
  return QuantumFamily(source, index, std::move(coeffs));
}

QuantumFamily permutation_family(std::span<const grouporacle::Permutation> perms, const Tolerance& tol) {
  if (perms.empty()) throw ArgumentError("permutation family needs at least one permutation");
  const std::size_t n = perms.front().degree(), s = perms.size();
  for (const auto& p : perms)
    if (p.degree() != n) throw ArgumentError("permutations of different degrees");
  std::vector<Vector> coeffs(n * n, Vector(s));
  for (std::size_t k = 0; k < s; ++k)
    for (std::size_t i = 0; i < n; ++i) coeffs[i * n + perms[k](static_cast<grouporacle::Element>(i))][k] = 1.0;
  return QuantumFamily(uniform_source(n, tol), StarAlgebra::commutative(s), std::move(coeffs));
}

double magic_unitary_residual(std::span<const CMatrix> p, std::size_t n) {
  if (p.size() != n * n || n == 0) throw ShapeError("magic unitary needs n*n blocks");
  const std::size_t d = p.front().rows();
  const CMatrix id = CMatrix::identity(d);
  double worst = 0;
  for (const auto& x : p) {
    if (x.rows() != d || x.cols() != d) throw ShapeError("magic unitary blocks must share one square size");
    worst = std::max({worst, cnum::max_abs_diff(cnum::matmul(x, x), x), cnum::max_abs_diff(x, x.adjoint())});
  }
  for (std::size_t i = 0; i < n; ++i) {
    CMatrix row(d, d), col(d, d);
    for (std::size_t j = 0; j < n; ++j) {
      row += p[i * n + j];
      col += p[j * n + i];
    }
    worst = std::max({worst, cnum::max_abs_diff(row, id), cnum::max_abs_diff(col, id)});
  }
  return worst;
}

Vector matrix_to_coords(const CMatrix& m) { return Vector(m.entries().begin(), m.entries().end()); }

CMatrix coords_to_matrix(std::span<const Complex> v, std::size_t d) {
  if (v.size() != d * d) throw ShapeError("coordinate vector is not d^2 long");
  return CMatrix(d, d, Vector(v.begin(), v.end()));
}

QuantumFamily family_from_magic_unitary(std::span<const CMatrix> p, std::size_t n, const Tolerance& tol) {
  const double res = magic_unitary_residual(p, n);
  if (res > tol.eps_eq) throw PreconditionError("not a magic unitary (residual " + std::to_string(res) + ")");
  const std::size_t d = p.front().rows();
  std::vector<Vector> coeffs;
  coeffs.reserve(n * n);
  for (const auto& x : p) coeffs.push_back(matrix_to_coords(x));
  const std::size_t blocks[] = {d};
  return QuantumFamily(uniform_source(n, tol), StarAlgebra::from_blocks(blocks), std::move(coeffs));
}

}  // namespace qsym::qfam
