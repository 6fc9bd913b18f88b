#include "qsym/fqg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "qsym/errors.hpp"

namespace qsym::fqg {

namespace {

struct Entry {
  std::size_t row;
  Complex value;
};

// Nonzero entries of each column of delta.
std::vector<std::vector<Entry>> sparse_columns(const CMatrix& m) {
  std::vector<std::vector<Entry>> cols(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (m(r, c) != 0.0) cols[c].push_back({r, m(r, c)});
  return cols;
}

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

double norm_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

#ifdef __SIZEOF_FLOAT128__
using Wide = __float128;
#else
using Wide = long double;
#endif

// Complex matrix in extended precision, split into real and imaginary parts.
// A unimodular eigenvalue of P rounded to 1 + eps turns into 1 + N*eps in
// P^N, which swamps the 1/N decay of the Cesaro steps in double precision.
struct WideMatrix {
  std::size_t n = 0;
  std::vector<Wide> re, im;

  explicit WideMatrix(std::size_t dim) : n(dim), re(dim * dim), im(dim * dim) {}
  explicit WideMatrix(const CMatrix& m) : WideMatrix(m.rows()) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        re[i * n + j] = m(i, j).real();
        im[i * n + j] = m(i, j).imag();
      }
  }
  static WideMatrix identity(std::size_t dim) {
    WideMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.re[i * dim + i] = 1;
    return m;
  }
  WideMatrix operator*(const WideMatrix& o) const {
    WideMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const Wide ar = re[i * n + k], ai = im[i * n + k];
        if (ar == 0 && ai == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
          r.re[i * n + j] += ar * o.re[k * n + j] - ai * o.im[k * n + j];
          r.im[i * n + j] += ar * o.im[k * n + j] + ai * o.re[k * n + j];
        }
      }
    return r;
  }
  WideMatrix& operator+=(const WideMatrix& o) {
    for (std::size_t i = 0; i < re.size(); ++i) {
      re[i] += o.re[i];
      im[i] += o.im[i];
    }
    return *this;
  }
  // (w^T M) / scale, rounded to double
  Functional left_apply(std::span<const Complex> w, Wide scale) const {
    Functional out(n);
    for (std::size_t j = 0; j < n; ++j) {
      Wide sr = 0, si = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const Wide wr = w[i].real(), wi = w[i].imag();
        sr += wr * re[i * n + j] - wi * im[i * n + j];
        si += wr * im[i * n + j] + wi * re[i * n + j];
      }
      out[j] = Complex(static_cast<double>(sr / scale), static_cast<double>(si / scale));
    }
    return out;
  }
};

}  // namespace

double FqgReport::worst() const {
  return std::max({delta_hom, coassociativity, counit_law, counit_character, antipode_law, haar_invariance});
}

bool FqgReport::ok(const Tolerance& tol) const {
  return worst() <= tol.eps_eq && haar_state && left_cancellation_rank == dim * dim &&
         right_cancellation_rank == dim * dim;
}

FiniteQuantumGroup::FiniteQuantumGroup(StarAlgebra alg, CMatrix delta, Functional counit, CMatrix antipode,
                                       StateFunctional haar)
    : alg_(std::move(alg)),
      delta_(std::move(delta)),
      counit_(std::move(counit)),
      antipode_(std::move(antipode)),
      haar_(std::move(haar)) {
  const std::size_t n = alg_.dim();
  if (delta_.rows() != n * n || delta_.cols() != n) throw ShapeError("coproduct must be dim^2 x dim");
  if (counit_.size() != n) throw ShapeError("counit length differs from algebra dimension");
  if (antipode_.rows() != n || antipode_.cols() != n) throw ShapeError("antipode must be dim x dim");
  if (haar_.coeffs.size() != n) throw ShapeError("Haar state length differs from algebra dimension");
  if (!delta_.all_finite() || !antipode_.all_finite()) throw ArgumentError("non-finite quantum group data");
}

FiniteQuantumGroup FiniteQuantumGroup::function_algebra(const grouporacle::FiniteGroup& g) {
  const std::size_t n = g.order();
  CMatrix delta(n * n, n);
  for (grouporacle::Element a = 0; a < n; ++a)
    for (grouporacle::Element b = 0; b < n; ++b) delta(a * n + b, g.mul(a, b)) = 1.0;
  Functional counit(n);
  counit[g.identity()] = 1.0;
  CMatrix s(n, n);
  for (grouporacle::Element a = 0; a < n; ++a) s(g.inverse(a), a) = 1.0;
  return {StarAlgebra::function_algebra(g), delta, counit, s, staralg::uniform_state(n)};
}

FiniteQuantumGroup FiniteQuantumGroup::group_algebra(const grouporacle::FiniteGroup& g) {
  const std::size_t n = g.order();
  CMatrix delta(n * n, n);
  for (std::size_t a = 0; a < n; ++a) delta(a * n + a, a) = 1.0;
  CMatrix s(n, n);
  for (grouporacle::Element a = 0; a < n; ++a) s(g.inverse(a), a) = 1.0;
  StateFunctional h{Vector(n)};
  h.coeffs[g.identity()] = 1.0;
  return {StarAlgebra::group_algebra(g), delta, Functional(n, 1.0), s, h};
}

Vector apply_delta_at(const FiniteQuantumGroup& q, std::span<const Complex> v, std::size_t factors, std::size_t slot) {
  const std::size_t n = q.dim();
  if (slot >= factors) throw ArgumentError("coproduct slot out of range");
  const std::size_t pre = ipow(n, slot), post = ipow(n, factors - slot - 1);
  if (v.size() != pre * n * post) throw ShapeError("vector length does not match tensor power");
  const auto cols = sparse_columns(q.delta());
  Vector out(pre * n * n * post);
  for (std::size_t p = 0; p < pre; ++p)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t s = 0; s < post; ++s) {
        const Complex x = v[(p * n + a) * post + s];
        if (x == 0.0) continue;
        for (const Entry& e : cols[a]) out[(p * n * n + e.row) * post + s] += x * e.value;
      }
  return out;
}

CMatrix iterated_coproduct(const FiniteQuantumGroup& q, std::size_t n, Nesting nesting) {
  if (n == 0) throw ArgumentError("iterated coproduct needs n >= 1");
  const std::size_t d = q.dim();
  CMatrix out(ipow(d, n), d);
  for (std::size_t j = 0; j < d; ++j) {
    Vector v = q.alg().basis(j);
    for (std::size_t k = 1; k < n; ++k) v = apply_delta_at(q, v, k, nesting == Nesting::left ? 0 : k - 1);
    out.set_col(j, v);
  }
  return out;
}

Functional convolve(const FiniteQuantumGroup& q, std::span<const Complex> w1, std::span<const Complex> w2) {
  if (w1.size() != q.dim() || w2.size() != q.dim()) throw ShapeError("functional length differs from dim");
  return cnum::vecmat(cnum::kron(w1, w2), q.delta());
}

CMatrix convolution_operator(const FiniteQuantumGroup& q, std::span<const Complex> w) {
  const std::size_t n = q.dim();
  if (w.size() != n) throw ShapeError("functional length differs from dim");
  CMatrix p(n, n);
  const CMatrix& d = q.delta();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (w[b] == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) p(a, j) += w[b] * d(a * n + b, j);
    }
  return p;
}

FqgReport FiniteQuantumGroup::check(const Tolerance& tol) const {
  const std::size_t n = dim();
  FqgReport r;
  r.dim = n;
  const StarAlgebra a2 = StarAlgebra::tensor(alg_, alg_);
  r.delta_hom = staralg::check_star_hom({alg_, a2, delta_}).worst();

  const Vector& one = alg_.unit();
  for (std::size_t j = 0; j < n; ++j) {
    const Vector dj = delta_.col(j);
    r.coassociativity =
        std::max(r.coassociativity, cnum::max_abs_diff(apply_delta_at(*this, dj, 2, 0), apply_delta_at(*this, dj, 2, 1)));
    Vector left(n), right(n), ant(n), hl(n), hr(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const Complex c = delta_(a * n + b, j);
        if (c == 0.0) continue;
        left[b] += counit_[a] * c;
        right[a] += counit_[b] * c;
        hl[a] += haar_.coeffs[b] * c;
        hr[b] += haar_.coeffs[a] * c;
      }
    const Vector e = alg_.basis(j);
    r.counit_law = std::max({r.counit_law, cnum::max_abs_diff(left, e), cnum::max_abs_diff(right, e)});
    Vector hj(n), ej(n);
    for (std::size_t k = 0; k < n; ++k) {
      hj[k] = haar_.coeffs[j] * one[k];
      ej[k] = counit_[j] * one[k];
    }
    r.haar_invariance = std::max({r.haar_invariance, cnum::max_abs_diff(hl, hj), cnum::max_abs_diff(hr, hj)});
    Vector sl(n), sr(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const Complex c = delta_(a * n + b, j);
        if (c == 0.0) continue;
        const Vector sa = antipode_.col(a), sb = antipode_.col(b);
        const Vector x = alg_.multiply(sa, alg_.basis(b));
        const Vector y = alg_.multiply(alg_.basis(a), sb);
        for (std::size_t k = 0; k < n; ++k) {
          sl[k] += c * x[k];
          sr[k] += c * y[k];
        }
      }
    r.antipode_law = std::max({r.antipode_law, cnum::max_abs_diff(sl, ej), cnum::max_abs_diff(sr, ej)});
  }

  Complex eps_one = 0;
  for (std::size_t k = 0; k < n; ++k) eps_one += counit_[k] * one[k];
  r.counit_character = std::abs(eps_one - 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      Complex kl = 0;
      for (const auto& t : alg_.product(k, l)) kl += t.coeff * counit_[t.index];
      r.counit_character = std::max(r.counit_character, std::abs(kl - counit_[k] * counit_[l]));
    }
    Complex ks = 0;
    const Vector sk = alg_.star(alg_.basis(k));
    for (std::size_t i = 0; i < n; ++i) ks += counit_[i] * sk[i];
    r.counit_character = std::max(r.counit_character, std::abs(ks - std::conj(counit_[k])));
  }
  r.haar_state = is_state(alg_, haar_.coeffs, tol);

  // a (x) b -> Delta(a)(1 (x) b) and a (x) b -> (a (x) 1) Delta(b)
  CMatrix t1(n * n, n * n), t2(n * n, n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          const Complex x = delta_(c * n + d, a);
          if (x != 0.0)
            for (const auto& t : alg_.product(d, b)) t1(c * n + t.index, a * n + b) += x * t.coeff;
          const Complex y = delta_(c * n + d, b);
          if (y != 0.0)
            for (const auto& t : alg_.product(a, c)) t2(t.index * n + d, a * n + b) += y * t.coeff;
        }
  r.left_cancellation_rank = cnum::rank(t1, tol);
  r.right_cancellation_rank = cnum::rank(t2, tol);
  return r;
}

bool FiniteQuantumGroup::is_cocommutative(const Tolerance& tol) const {
  const std::size_t n = dim();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (std::abs(delta_(a * n + b, j) - delta_(b * n + a, j)) > tol.eps_eq) return false;
  return true;
}

bool is_state(const StarAlgebra& alg, std::span<const Complex> w, const Tolerance& tol) {
  const staralg::StateReport r = staralg::check_state(alg, {Vector(w.begin(), w.end())}, tol);
  return r.unital && r.positive;
}

StateFunctional haar_by_invariance(const StarAlgebra& alg, const CMatrix& delta, const Tolerance& tol) {
  const std::size_t n = alg.dim();
  if (delta.rows() != n * n || delta.cols() != n) throw ShapeError("coproduct must be dim^2 x dim");
  const Vector& one = alg.unit();
  CMatrix eq(2 * n * n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        eq(j * n + a, b) += delta(a * n + b, j);
        eq(n * n + j * n + a, b) += delta(b * n + a, j);
      }
      eq(j * n + a, j) -= one[a];
      eq(n * n + j * n + a, j) -= one[a];
    }
  const cnum::Subspace ker = cnum::nullspace(eq, tol, 1.0);
  if (ker.dim() != 1)
    throw ConsistencyError("invariance equations have a " + std::to_string(ker.dim()) + "-dimensional solution space");
  Vector h = ker.vector(0);
  Complex h1 = 0;
  for (std::size_t k = 0; k < n; ++k) h1 += h[k] * one[k];
  if (std::abs(h1) <= tol.eps_rank) throw ConsistencyError("invariant functional vanishes on the unit");
  for (auto& c : h) c /= h1;
  return {h};
}

CesaroResult cesaro_mean(const FiniteQuantumGroup& q, std::span<const Complex> w, double tol, std::size_t max_iter,
                         CesaroMode mode, const Tolerance& rank_tol) {
  if (!(tol > 0.0)) throw ArgumentError("Cesaro tolerance must be positive");
  if (max_iter == 0) throw ArgumentError("max_iter must be at least 1");
  if (!is_state(q.alg(), w, rank_tol)) throw PreconditionError("Cesaro mean needs a state");
  const std::size_t n = q.dim();
  const CMatrix p = convolution_operator(q, w);
  CesaroResult r;
  if (mode == CesaroMode::exact) {
    const CMatrix m = p - CMatrix::identity(n);
    const CMatrix right = cnum::nullspace(m, rank_tol).basis();
    const CMatrix left = cnum::nullspace(m.adjoint(), rank_tol).basis();
    if (right.cols() != left.cols() || right.cols() == 0)
      throw ConsistencyError("eigenvalue 1 of the convolution operator is not semisimple");
    const CMatrix e = cnum::matmul(cnum::matmul(right, cnum::inverse(cnum::matmul(left.adjoint(), right))), left.adjoint());
    r.mean = cnum::vecmat(w, e);
  } else {
    // At most 60 doublings so that N fits in a size_t.
    const std::size_t cap = std::min<std::size_t>(max_iter, 60);
    // Rescaling by w(1) in wide precision keeps the eigenvalue 1 of P at 1.
    const Vector& one = q.alg().unit();
    Wide ur = 0, ui = 0;
    for (std::size_t i = 0; i < n; ++i) {
      ur += static_cast<Wide>(w[i].real()) * one[i].real() - static_cast<Wide>(w[i].imag()) * one[i].imag();
      ui += static_cast<Wide>(w[i].real()) * one[i].imag() + static_cast<Wide>(w[i].imag()) * one[i].real();
    }
    const Wide den = ur * ur + ui * ui;
    std::vector<Wide> wr(n), wi(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Wide a = w[i].real(), b = w[i].imag();
      wr[i] = (a * ur + b * ui) / den;
      wi[i] = (b * ur - a * ui) / den;
    }
    const CMatrix& d = q.delta();
    WideMatrix sum = WideMatrix::identity(n), pow(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t j = 0; j < n; ++j) {
          const Complex dv = d(a * n + b, j);
          if (dv == 0.0) continue;
          pow.re[a * n + j] += wr[b] * dv.real() - wi[b] * dv.imag();
          pow.im[a * n + j] += wr[b] * dv.imag() + wi[b] * dv.real();
        }
    Functional prev(w.begin(), w.end());
    std::size_t terms = 1;
    double step = 0;
    bool done = false;
    for (std::size_t it = 1; it <= cap; ++it) {
      sum += pow * sum;
      pow = pow * pow;
      terms *= 2;
      Functional cur = sum.left_apply(w, static_cast<Wide>(terms));
      step = norm_diff(cur, prev);
      prev = std::move(cur);
      r.iterations = it;
      if (step <= tol) {
        done = true;
        break;
      }
    }
    if (!done)
      throw ConvergenceError("Cesaro means did not settle within " + std::to_string(cap) + " doublings", step);
    r.mean = std::move(prev);
    r.terms = terms;
    r.step_residual = step;
  }
  r.idempotency = norm_diff(convolve(q, r.mean, r.mean), r.mean);
  return r;
}

FiniteQuantumGroup dual(const FiniteQuantumGroup& q, const Tolerance& tol) {
  const StarAlgebra& a = q.alg();
  const CMatrix mult = q.delta().transpose();
  const CMatrix inv = cnum::matmul(q.antipode().transpose(), a.inv_matrix().adjoint());
  const StarAlgebra ad = StarAlgebra::from_mult_matrix(mult, q.counit(), inv);
  const CMatrix delta = a.mult_matrix().transpose();
  const StateFunctional h = haar_by_invariance(ad, delta, tol);
  return {ad, delta, a.unit(), q.antipode().transpose(), h};
}

std::optional<CharacterGroup> character_group(const FiniteQuantumGroup& q, const Tolerance& tol) {
  const StarAlgebra& a = q.alg();
  if (!a.is_commutative(tol)) return std::nullopt;
  const std::size_t n = a.dim();
  const cnum::HermitianEigen ge = cnum::hermitian_eigen(staralg::gram(a, q.haar()));
  if (ge.values.front() <= tol.eps_rank) throw PreconditionError("Haar state is not faithful");
  CMatrix half(n, n), half_inv(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    half(k, k) = std::sqrt(ge.values[k]);
    half_inv(k, k) = 1.0 / std::sqrt(ge.values[k]);
  }
  const CMatrix w = cnum::matmul(cnum::matmul(ge.vectors, half), ge.vectors.adjoint());
  const CMatrix w_inv = cnum::matmul(cnum::matmul(ge.vectors, half_inv), ge.vectors.adjoint());

  std::mt19937_64 rng(0xc4a7);
  std::normal_distribution<double> nd;
  for (int attempt = 0; attempt < 10; ++attempt) {
    Vector x(n);
    for (std::size_t k = 0; k < n; ++k) {
      const Vector e = a.basis(k), es = a.star(e);
      const double c = nd(rng);
      for (std::size_t i = 0; i < n; ++i) x[i] += c * (e[i] + es[i]);
    }
    const CMatrix h = cnum::matmul(cnum::matmul(w, a.left_mult(x)), w_inv);
    const cnum::HermitianEigen he = cnum::hermitian_eigen(0.5 * (h + h.adjoint()));
    const double scale = std::max(1.0, std::max(std::abs(he.values.front()), std::abs(he.values.back())));
    bool separated = true;
    for (std::size_t k = 1; k < n; ++k) separated = separated && he.values[k] - he.values[k - 1] > 1e-6 * scale;
    if (!separated) continue;

    std::vector<Functional> chars;
    for (std::size_t k = 0; k < n; ++k) {
      const Vector v = cnum::matvec(w_inv, he.vectors.col(k));
      const double vv = cnum::norm2(v) * cnum::norm2(v);
      Functional chi(n);
      for (std::size_t j = 0; j < n; ++j) {
        const Vector ev = a.multiply(a.basis(j), v);
        Complex s = 0;
        for (std::size_t i = 0; i < n; ++i) s += std::conj(v[i]) * ev[i];
        chi[j] = s / vv;
      }
      chars.push_back(std::move(chi));
    }
    auto find = [&](const Functional& f) {
      std::size_t best = n;
      double bestd = 1e-6;
      for (std::size_t k = 0; k < n; ++k) {
        const double d = cnum::max_abs_diff(chars[k], f);
        if (d < bestd) {
          bestd = d;
          best = k;
        }
      }
      return best;
    };
    const std::size_t e = find(q.counit());
    if (e == n) throw ConsistencyError("counit is not among the characters");
    std::swap(chars[0], chars[e]);
    std::vector<std::vector<grouporacle::Element>> table(n, std::vector<grouporacle::Element>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = find(convolve(q, chars[i], chars[j]));
        if (k == n) throw ConsistencyError("characters are not closed under convolution");
        table[i][j] = static_cast<grouporacle::Element>(k);
      }
    return CharacterGroup{grouporacle::FiniteGroup(std::move(table)), std::move(chars)};
  }
  throw ConsistencyError("could not separate the characters of a commutative algebra");
}

std::optional<grouporacle::FiniteGroup> grouplike_group(const FiniteQuantumGroup& q, const Tolerance& tol) {
  if (!q.is_cocommutative(tol)) return std::nullopt;
  auto c = character_group(dual(q, tol), tol);
  if (!c) return std::nullopt;
  return std::move(c->group);
}

}  // namespace qsym::fqg
