#include "qsym/staralg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "qsym/errors.hpp"

namespace qsym::staralg {

namespace {

constexpr double kDropBelow = 1e-15;
// Above this dimension the associativity check samples random triples.
constexpr std::size_t kExhaustiveAssociativity = 48;

std::string dims(std::size_t a, std::size_t b) { return std::to_string(a) + " vs " + std::to_string(b); }

}  // namespace

double AlgebraReport::worst() const {
  return std::max({associativity, unit, star_antimultiplicative, star_involutive});
}

double HomReport::worst() const { return std::max({multiplicative, unital, star}); }

struct StarAlgebra::Impl {
  std::size_t n = 0;
  std::vector<std::size_t> offsets;  // CSR over pairs k*n + l
  std::vector<Term> terms;
  Vector unit;
  std::vector<std::size_t> inv_offsets;  // CSR over columns j
  std::vector<Term> inv_terms;
  std::optional<std::vector<std::size_t>> blocks;

  void add_products(const auto& coeff_of) {
    offsets.assign(1, 0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) {
        coeff_of(k, l, terms);
        offsets.push_back(terms.size());
      }
  }

  void set_inv(const CMatrix& inv) {
    inv_offsets.assign(1, 0);
    inv_terms.clear();
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k)
        if (std::abs(inv(k, j)) > kDropBelow) inv_terms.push_back({static_cast<std::uint32_t>(k), inv(k, j)});
      inv_offsets.push_back(inv_terms.size());
    }
  }

  std::span<const Term> prod(std::size_t k, std::size_t l) const {
    const std::size_t i = k * n + l;
    return {terms.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
  std::span<const Term> inv_col(std::size_t j) const {
    return {inv_terms.data() + inv_offsets[j], inv_offsets[j + 1] - inv_offsets[j]};
  }
};

StarAlgebra StarAlgebra::from_structure(std::size_t dim, std::span<const Complex> mult, Vector unit, const CMatrix& inv) {
  if (dim == 0) throw ArgumentError("algebra dimension must be positive");
  if (mult.size() != dim * dim * dim) throw ShapeError("structure tensor must have dim^3 entries");
  CMatrix m(dim, dim * dim);
  for (std::size_t p = 0; p < dim; ++p)
    for (std::size_t kl = 0; kl < dim * dim; ++kl) m(p, kl) = mult[p * dim * dim + kl];
  return from_mult_matrix(m, std::move(unit), inv);
}

StarAlgebra StarAlgebra::from_mult_matrix(const CMatrix& mult, Vector unit, const CMatrix& inv) {
  const std::size_t n = mult.rows();
  if (n == 0) throw ArgumentError("algebra dimension must be positive");
  if (mult.cols() != n * n) throw ShapeError("mult must be dim x dim^2");
  if (unit.size() != n) throw ShapeError("unit length " + dims(unit.size(), n));
  if (inv.rows() != n || inv.cols() != n) throw ShapeError("involution must be dim x dim");
  if (!mult.all_finite() || !inv.all_finite()) throw ArgumentError("non-finite structure data");
  auto impl = std::make_shared<Impl>();
  impl->n = n;
  impl->unit = std::move(unit);
  impl->add_products([&](std::size_t k, std::size_t l, std::vector<Term>& out) {
    for (std::size_t p = 0; p < n; ++p) {
      const Complex c = mult(p, k * n + l);
      if (std::abs(c) > kDropBelow) out.push_back({static_cast<std::uint32_t>(p), c});
    }
  });
  impl->set_inv(inv);
  return StarAlgebra(std::move(impl));
}

StarAlgebra StarAlgebra::from_blocks(std::span<const std::size_t> blocks) {
  if (blocks.empty()) throw ArgumentError("block list is empty");
  std::vector<std::size_t> offset;
  std::vector<std::size_t> block_of, row_of, col_of;
  std::size_t n = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b] == 0) throw ArgumentError("block sizes must be at least 1");
    offset.push_back(n);
    for (std::size_t k = 0; k < blocks[b]; ++k)
      for (std::size_t l = 0; l < blocks[b]; ++l) {
        block_of.push_back(b);
        row_of.push_back(k);
        col_of.push_back(l);
      }
    n += blocks[b] * blocks[b];
  }
  auto impl = std::make_shared<Impl>();
  impl->n = n;
  impl->blocks = std::vector<std::size_t>(blocks.begin(), blocks.end());
  impl->add_products([&](std::size_t x, std::size_t y, std::vector<Term>& out) {
    if (block_of[x] != block_of[y] || col_of[x] != row_of[y]) return;
    const std::size_t b = block_of[x], m = blocks[b];
    out.push_back({static_cast<std::uint32_t>(offset[b] + row_of[x] * m + col_of[y]), 1.0});
  });
  impl->unit.assign(n, 0.0);
  CMatrix inv(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t b = block_of[x], m = blocks[b];
    if (row_of[x] == col_of[x]) impl->unit[x] = 1.0;
    inv(offset[b] + col_of[x] * m + row_of[x], x) = 1.0;
  }
  impl->set_inv(inv);
  return StarAlgebra(std::move(impl));
}

StarAlgebra StarAlgebra::commutative(std::size_t n) {
  const std::vector<std::size_t> blocks(n, 1);
  return from_blocks(blocks);
}

StarAlgebra StarAlgebra::function_algebra(const grouporacle::FiniteGroup& g) { return commutative(g.order()); }

StarAlgebra StarAlgebra::group_algebra(const grouporacle::FiniteGroup& g) {
  const std::size_t n = g.order();
  auto impl = std::make_shared<Impl>();
  impl->n = n;
  impl->add_products([&](std::size_t a, std::size_t b, std::vector<Term>& out) {
    out.push_back({g.mul(static_cast<grouporacle::Element>(a), static_cast<grouporacle::Element>(b)), 1.0});
  });
  impl->unit.assign(n, 0.0);
  impl->unit[g.identity()] = 1.0;
  CMatrix inv(n, n);
  for (std::size_t a = 0; a < n; ++a) inv(g.inverse(static_cast<grouporacle::Element>(a)), a) = 1.0;
  impl->set_inv(inv);
  return StarAlgebra(std::move(impl));
}

StarAlgebra StarAlgebra::tensor(const StarAlgebra& a, const StarAlgebra& b) {
  const std::size_t na = a.dim(), nb = b.dim(), n = na * nb;
  auto impl = std::make_shared<Impl>();
  impl->n = n;
  impl->add_products([&](std::size_t x, std::size_t y, std::vector<Term>& out) {
    const auto pa = a.product(x / nb, y / nb);
    const auto pb = b.product(x % nb, y % nb);
    for (const Term& s : pa)
      for (const Term& t : pb) out.push_back({static_cast<std::uint32_t>(s.index * nb + t.index), s.coeff * t.coeff});
  });
  impl->unit = cnum::kron(a.unit(), b.unit());
  impl->inv_offsets.assign(1, 0);
  for (std::size_t x = 0; x < n; ++x) {
    for (const Term& s : a.impl_->inv_col(x / nb))
      for (const Term& t : b.impl_->inv_col(x % nb))
        impl->inv_terms.push_back({static_cast<std::uint32_t>(s.index * nb + t.index), s.coeff * t.coeff});
    impl->inv_offsets.push_back(impl->inv_terms.size());
  }
  return StarAlgebra(std::move(impl));
}

StarAlgebra StarAlgebra::direct_sum(const StarAlgebra& a, const StarAlgebra& b) {
  const std::size_t na = a.dim(), nb = b.dim(), n = na + nb;
  auto impl = std::make_shared<Impl>();
  impl->n = n;
  impl->add_products([&](std::size_t x, std::size_t y, std::vector<Term>& out) {
    if (x < na && y < na) {
      for (const Term& t : a.product(x, y)) out.push_back(t);
    } else if (x >= na && y >= na) {
      for (const Term& t : b.product(x - na, y - na))
        out.push_back({static_cast<std::uint32_t>(t.index + na), t.coeff});
    }
  });
  impl->unit = a.unit();
  impl->unit.insert(impl->unit.end(), b.unit().begin(), b.unit().end());
  impl->inv_offsets.assign(1, 0);
  for (std::size_t x = 0; x < n; ++x) {
    if (x < na) {
      for (const Term& t : a.impl_->inv_col(x)) impl->inv_terms.push_back(t);
    } else {
      for (const Term& t : b.impl_->inv_col(x - na))
        impl->inv_terms.push_back({static_cast<std::uint32_t>(t.index + na), t.coeff});
    }
    impl->inv_offsets.push_back(impl->inv_terms.size());
  }
  if (a.blocks() && b.blocks()) {
    std::vector<std::size_t> bl = *a.blocks();
    bl.insert(bl.end(), b.blocks()->begin(), b.blocks()->end());
    impl->blocks = std::move(bl);
  }
  return StarAlgebra(std::move(impl));
}

std::size_t StarAlgebra::dim() const noexcept { return impl_ ? impl_->n : 0; }

const std::optional<std::vector<std::size_t>>& StarAlgebra::blocks() const noexcept {
  static const std::optional<std::vector<std::size_t>> none;
  return impl_ ? impl_->blocks : none;
}

std::span<const StarAlgebra::Term> StarAlgebra::product(std::size_t k, std::size_t l) const { return impl_->prod(k, l); }

Vector StarAlgebra::basis(std::size_t k) const {
  Vector v(dim());
  v.at(k) = 1.0;
  return v;
}

const Vector& StarAlgebra::unit() const noexcept { return impl_->unit; }

Vector StarAlgebra::multiply(std::span<const Complex> x, std::span<const Complex> y) const {
  const std::size_t n = dim();
  if (x.size() != n || y.size() != n) throw ShapeError("multiply: operand length " + dims(x.size(), n));
  Vector out(n);
  std::vector<std::size_t> ynz;
  for (std::size_t l = 0; l < n; ++l)
    if (y[l] != 0.0) ynz.push_back(l);
  for (std::size_t k = 0; k < n; ++k) {
    if (x[k] == 0.0) continue;
    for (std::size_t l : ynz) {
      const Complex xy = x[k] * y[l];
      for (const Term& t : impl_->prod(k, l)) out[t.index] += xy * t.coeff;
    }
  }
  return out;
}

Vector StarAlgebra::star(std::span<const Complex> x) const {
  const std::size_t n = dim();
  if (x.size() != n) throw ShapeError("star: operand length " + dims(x.size(), n));
  Vector out(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (x[j] == 0.0) continue;
    const Complex c = std::conj(x[j]);
    for (const Term& t : impl_->inv_col(j)) out[t.index] += c * t.coeff;
  }
  return out;
}

CMatrix StarAlgebra::left_mult(std::span<const Complex> x) const {
  const std::size_t n = dim();
  if (x.size() != n) throw ShapeError("left_mult: operand length " + dims(x.size(), n));
  CMatrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (x[k] == 0.0) continue;
    for (std::size_t l = 0; l < n; ++l)
      for (const Term& t : impl_->prod(k, l)) m(t.index, l) += x[k] * t.coeff;
  }
  return m;
}

CMatrix StarAlgebra::right_mult(std::span<const Complex> x) const {
  const std::size_t n = dim();
  if (x.size() != n) throw ShapeError("right_mult: operand length " + dims(x.size(), n));
  CMatrix m(n, n);
  for (std::size_t l = 0; l < n; ++l) {
    if (x[l] == 0.0) continue;
    for (std::size_t k = 0; k < n; ++k)
      for (const Term& t : impl_->prod(k, l)) m(t.index, k) += x[l] * t.coeff;
  }
  return m;
}

CMatrix StarAlgebra::mult_matrix() const {
  const std::size_t n = dim();
  CMatrix m(n, n * n);
  for (std::size_t kl = 0; kl < n * n; ++kl)
    for (const Term& t : impl_->prod(kl / n, kl % n)) m(t.index, kl) += t.coeff;
  return m;
}

CMatrix StarAlgebra::inv_matrix() const {
  const std::size_t n = dim();
  CMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (const Term& t : impl_->inv_col(j)) m(t.index, j) += t.coeff;
  return m;
}

namespace {

// (x y) z and x (y z) for dense x, y, z.
double associator(const StarAlgebra& a, std::span<const Complex> x, std::span<const Complex> y,
                  std::span<const Complex> z) {
  return cnum::max_abs_diff(a.multiply(a.multiply(x, y), z), a.multiply(x, a.multiply(y, z)));
}

}  // namespace

AlgebraReport StarAlgebra::check() const {
  const std::size_t n = dim();
  AlgebraReport r;
  if (n <= kExhaustiveAssociativity) {
    Vector lhs(n), rhs(n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = 0; m < n; ++m) {
          std::fill(lhs.begin(), lhs.end(), 0.0);
          std::fill(rhs.begin(), rhs.end(), 0.0);
          for (const Term& s : impl_->prod(k, l))
            for (const Term& t : impl_->prod(s.index, m)) lhs[t.index] += s.coeff * t.coeff;
          for (const Term& s : impl_->prod(l, m))
            for (const Term& t : impl_->prod(k, s.index)) rhs[t.index] += s.coeff * t.coeff;
          r.associativity = std::max(r.associativity, cnum::max_abs_diff(lhs, rhs));
        }
  } else {
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> nd;
    auto rv = [&] {
      Vector v(n);
      for (auto& c : v) c = {nd(rng), nd(rng)};
      const double s = cnum::norm2(v);
      for (auto& c : v) c /= s;
      return v;
    };
    for (int trial = 0; trial < 8; ++trial) {
      const Vector x = rv(), y = rv(), z = rv();
      r.associativity = std::max(r.associativity, associator(*this, x, y, z));
    }
  }
  const Vector& u = unit();
  for (std::size_t k = 0; k < n; ++k) {
    const Vector e = basis(k);
    r.unit = std::max({r.unit, cnum::max_abs_diff(multiply(u, e), e), cnum::max_abs_diff(multiply(e, u), e)});
    r.star_involutive = std::max(r.star_involutive, cnum::max_abs_diff(star(star(e)), e));
  }
  std::vector<Vector> stars(n);
  for (std::size_t k = 0; k < n; ++k) stars[k] = star(basis(k));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      Vector kl(n);
      for (const Term& t : impl_->prod(k, l)) kl[t.index] += t.coeff;
      r.star_antimultiplicative =
          std::max(r.star_antimultiplicative, cnum::max_abs_diff(star(kl), multiply(stars[l], stars[k])));
    }
  return r;
}

double StarAlgebra::commutativity_residual() const {
  const std::size_t n = dim();
  double worst = 0;
  Vector d(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = k + 1; l < n; ++l) {
      std::fill(d.begin(), d.end(), 0.0);
      for (const Term& t : impl_->prod(k, l)) d[t.index] += t.coeff;
      for (const Term& t : impl_->prod(l, k)) d[t.index] -= t.coeff;
      worst = std::max(worst, cnum::max_abs(d));
    }
  return worst;
}

std::size_t StarAlgebra::center_dim(const Tolerance& tol) const {
  const std::size_t n = dim();
  CMatrix stacked(n * n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t x = 0; x < n; ++x) {
      for (const Term& t : impl_->prod(k, x)) stacked(k * n + t.index, x) += t.coeff;
      for (const Term& t : impl_->prod(x, k)) stacked(k * n + t.index, x) -= t.coeff;
    }
  return cnum::nullspace(stacked, tol).dim();
}

Complex StateFunctional::operator()(std::span<const Complex> x) const {
  if (x.size() != coeffs.size()) throw ShapeError("state applied to vector of length " + dims(x.size(), coeffs.size()));
  Complex s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += coeffs[i] * x[i];
  return s;
}

StateFunctional uniform_state(std::size_t n) {
  if (n == 0) throw ArgumentError("uniform state on a zero-dimensional algebra");
  return {Vector(n, Complex(1.0 / static_cast<double>(n)))};
}

StateFunctional block_trace_state(const StarAlgebra& a, std::span<const double> weights) {
  if (!a.blocks()) throw ArgumentError("block_trace_state needs a block algebra");
  const auto& bl = *a.blocks();
  if (weights.size() != bl.size()) throw ShapeError("one weight per block expected");
  StateFunctional phi{Vector(a.dim())};
  std::size_t off = 0;
  for (std::size_t b = 0; b < bl.size(); ++b) {
    if (!(weights[b] >= 0.0)) throw ArgumentError("block weights must be nonnegative");
    for (std::size_t k = 0; k < bl[b]; ++k) phi.coeffs[off + k * bl[b] + k] = weights[b] / static_cast<double>(bl[b]);
    off += bl[b] * bl[b];
  }
  return phi;
}

CMatrix gram(const StarAlgebra& a, const StateFunctional& phi) {
  const std::size_t n = a.dim();
  if (phi.coeffs.size() != n) throw ShapeError("state length " + dims(phi.coeffs.size(), n));
  CMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector si = a.star(a.basis(i));
    for (std::size_t k = 0; k < n; ++k) {
      if (si[k] == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j)
        for (const auto& t : a.product(k, j)) g(i, j) += si[k] * t.coeff * phi.coeffs[t.index];
    }
  }
  return g;
}

StateReport check_state(const StarAlgebra& a, const StateFunctional& phi, const Tolerance& tol) {
  StateReport r;
  r.unital = std::abs(phi(a.unit()) - 1.0) <= tol.eps_eq;
  const CMatrix g = gram(a, phi);
  r.hermitian_residual = cnum::max_abs_diff(g, g.adjoint());
  const CMatrix h = 0.5 * (g + g.adjoint());
  r.min_eigenvalue = cnum::hermitian_eigen(h).values.front();
  r.positive = r.hermitian_residual <= tol.eps_eq && r.min_eigenvalue >= -tol.eps_eq;
  r.faithful = r.positive && r.min_eigenvalue > tol.eps_rank;
  return r;
}

OrthoBasisData orthonormalize(const StarAlgebra& a, const StateFunctional& phi, const Tolerance& tol) {
  const StateReport rep = check_state(a, phi, tol);
  if (!rep.unital || !rep.faithful)
    throw PreconditionError("orthonormalize needs a faithful state (smallest Gram eigenvalue " +
                            std::to_string(rep.min_eigenvalue) + ")");
  const std::size_t n = a.dim();
  const CMatrix g = gram(a, phi);
  auto inner = [&](const Vector& x, const Vector& y) {
    const Vector gy = cnum::matvec(g, y);
    Complex s = 0;
    for (std::size_t i = 0; i < n; ++i) s += std::conj(x[i]) * gy[i];
    return s;
  };
  std::vector<Vector> q;
  for (std::size_t j = 0; j < n; ++j) {
    Vector v = a.basis(j);
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& u : q) {
        const Complex c = inner(u, v);
        for (std::size_t i = 0; i < n; ++i) v[i] -= c * u[i];
      }
    const double nv = std::sqrt(std::max(0.0, inner(v, v).real()));
    if (nv <= tol.eps_rank) throw PreconditionError("Gram-Schmidt breakdown; state is numerically degenerate");
    for (auto& c : v) c /= nv;
    q.push_back(std::move(v));
  }

  OrthoBasisData d;
  d.change = CMatrix::from_columns(q, n);
  d.to_onb = cnum::matmul(d.change.adjoint(), g);
  d.m = CMatrix(n, n * n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      const Vector c = cnum::matvec(d.to_onb, a.multiply(q[k], q[l]));
      for (std::size_t p = 0; p < n; ++p) d.m(p, k * n + l) = c[p];
    }
  d.lambda = cnum::matvec(d.to_onb, a.unit());
  d.T = CMatrix(n, n);
  for (std::size_t l = 0; l < n; ++l) d.T.set_col(l, cnum::matvec(d.to_onb, a.star(q[l])));
  d.phi_e.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.phi_e[i] = phi(q[i]);
  d.T_condition = cnum::condition_number(d.T);
  return d;
}

HomReport check_star_hom(const StarHom& h) {
  const StarAlgebra& s = h.source;
  const StarAlgebra& t = h.target;
  const std::size_t ns = s.dim();
  if (h.matrix.rows() != t.dim() || h.matrix.cols() != ns)
    throw ShapeError("hom matrix is " + std::to_string(h.matrix.rows()) + "x" + std::to_string(h.matrix.cols()) +
                     ", expected " + std::to_string(t.dim()) + "x" + std::to_string(ns));
  HomReport r;
  std::vector<Vector> img(ns);
  for (std::size_t k = 0; k < ns; ++k) img[k] = h.matrix.col(k);
  for (std::size_t k = 0; k < ns; ++k)
    for (std::size_t l = 0; l < ns; ++l) {
      Vector lhs(t.dim());
      for (const auto& term : s.product(k, l))
        for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] += term.coeff * img[term.index][i];
      r.multiplicative = std::max(r.multiplicative, cnum::max_abs_diff(lhs, t.multiply(img[k], img[l])));
    }
  r.unital = cnum::max_abs_diff(h.apply(s.unit()), t.unit());
  for (std::size_t k = 0; k < ns; ++k)
    r.star = std::max(r.star, cnum::max_abs_diff(h.apply(s.star(s.basis(k))), t.star(img[k])));
  return r;
}

StarHom identity_hom(const StarAlgebra& a) { return {a, a, CMatrix::identity(a.dim())}; }

StarHom compose(const StarHom& g, const StarHom& f) {
  if (f.target.dim() != g.source.dim()) throw ShapeError("compose: " + dims(f.target.dim(), g.source.dim()));
  return {f.source, g.target, cnum::matmul(g.matrix, f.matrix)};
}

}  // namespace qsym::staralg
