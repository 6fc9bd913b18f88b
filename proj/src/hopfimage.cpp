#include "qsym/hopfimage.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "qsym/errors.hpp"

namespace qsym::hopfimage {

using cnum::Complex;
using cnum::Vector;

namespace {

// Orthonormal rows spanning the row space of m.
CMatrix row_basis(const CMatrix& m, const Tolerance& tol) { return cnum::image(m.adjoint(), tol).basis().adjoint(); }

Subspace kernel_of(const CMatrix& m, const Tolerance& tol) {
  if (m.rows() == 0) return Subspace::full(m.cols());
  return cnum::nullspace(m, tol);
}

// Kernel of m restricted to the span of the orthonormal columns of k.
Subspace restrict_kernel(const CMatrix& m, const Subspace& k, const Tolerance& tol) {
  if (k.dim() == 0) return k;
  if (m.rows() == 0) return k;
  const Subspace y = cnum::nullspace(cnum::matmul(m, k.basis()), tol, 1.0);
  if (y.dim() == 0) return Subspace(k.ambient_dim());
  return {k.ambient_dim(), cnum::matmul(k.basis(), y.basis())};
}

void require_hom_from(const FiniteQuantumGroup& q, const StarHom& L, const Tolerance& tol) {
  if (L.source.dim() != q.dim() || L.matrix.cols() != q.dim())
    throw PreconditionError("map does not start at the quantum group's algebra");
  if (L.matrix.rows() != L.target.dim()) throw ShapeError("map does not fit its target algebra");
  const staralg::HomReport r = staralg::check_star_hom(L);
  if (!r.ok(tol)) throw PreconditionError("map is not a unital *-homomorphism (residual " + std::to_string(r.worst()) + ")");
}

double span_scale(const CMatrix& m) { return std::max(1.0, m.max_abs()); }

CMatrix direct_sum_rows(std::span<const CMatrix> parts) {
  CMatrix out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = cnum::vstack(out, parts[i]);
  return out;
}

double ideal_residual(const StarAlgebra& a, const Subspace& j, const Tolerance& tol) {
  if (j.dim() == 0) return 0;
  const CMatrix c = cnum::complement(j, tol).basis();
  if (c.cols() == 0) return 0;
  const std::size_t n = a.dim();
  const CMatrix ch = c.adjoint();
  std::vector<CMatrix> right(n);
  for (std::size_t b = 0; b < n; ++b) right[b] = cnum::matmul(a.right_mult(a.basis(b)), j.basis());
  double worst = 0;
  for (std::size_t x = 0; x < n; ++x) {
    const CMatrix t = cnum::matmul(ch, a.left_mult(a.basis(x)));
    for (std::size_t b = 0; b < n; ++b) worst = std::max(worst, cnum::matmul(t, right[b]).max_abs());
  }
  return worst;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::kernel:
      return "kernel";
    case Method::coideal:
      return "coideal";
    case Method::both:
      return "both";
  }
  return "coideal";
}

Method method_from_string(const std::string& s) {
  if (s == "kernel") return Method::kernel;
  if (s == "coideal") return Method::coideal;
  if (s == "both") return Method::both;
  throw ArgumentError("unknown Hopf image method '" + s + "'");
}

double HopfImageResiduals::worst() const { return std::max({ideal, coideal, counit, factorization, quotient}); }

StarHom lambda_n(const FiniteQuantumGroup& q, const StarHom& L, std::size_t n) {
  if (n == 0) throw ArgumentError("lambda_n needs n >= 1");
  if (L.matrix.cols() != q.dim()) throw ShapeError("map does not start at the quantum group's algebra");
  StarAlgebra target = L.target;
  CMatrix tensor = L.matrix;
  for (std::size_t k = 1; k < n; ++k) {
    target = StarAlgebra::tensor(target, L.target);
    tensor = cnum::kron(tensor, L.matrix);
  }
  return {q.alg(), target, cnum::matmul(tensor, fqg::iterated_coproduct(q, n, fqg::Nesting::left))};
}

KernelSearch kernel_intersection(const FiniteQuantumGroup& q, const StarHom& L, std::size_t window,
                                 std::size_t max_depth, const Tolerance& tol) {
  if (window == 0) throw ArgumentError("stabilization window must be positive");
  // ker((X (x) L) Delta) only depends on the row space of X, so each
  // Lambda_n is carried by an orthonormal basis of its row space.
  const CMatrix rl = row_basis(L.matrix, tol);
  CMatrix rn = rl;
  KernelSearch out{kernel_of(L.matrix, tol), 1};
  std::size_t stable = 0;
  for (std::size_t depth = 2; out.J.dim() > 0 && stable < window; ++depth) {
    if (depth > max_depth)
      throw ConvergenceError("kernel intersection still shrinking at depth " + std::to_string(max_depth),
                             static_cast<double>(out.J.dim()));
    rn = row_basis(cnum::matmul(cnum::kron(rn, rl), q.delta()), tol);
    Subspace next = restrict_kernel(rn, out.J, tol);
    if (next.dim() == out.J.dim()) {
      ++stable;
    } else {
      stable = 0;
      out.depth = depth;
      out.J = std::move(next);
    }
  }
  return out;
}

KernelSearch coideal_fixed_point(const FiniteQuantumGroup& q, const StarHom& L, const Tolerance& tol) {
  const StarAlgebra& a = q.alg();
  const std::size_t n = a.dim();
  KernelSearch out{kernel_of(L.matrix, tol), 0};
  std::vector<CMatrix> left(n), right(n);
  for (std::size_t x = 0; x < n; ++x) {
    left[x] = a.left_mult(a.basis(x));
    right[x] = a.right_mult(a.basis(x));
  }
  while (out.J.dim() > 0) {
    ++out.depth;
    const CMatrix& kb = out.J.basis();
    const CMatrix ch = cnum::complement(out.J, tol).basis().adjoint();
    const std::size_t c = ch.rows();
    if (c == 0) break;
    // Delta(x) in K (x) A + A (x) K  <=>  (C^* (x) C^*) Delta x = 0
    CMatrix rows = cnum::matmul(cnum::kron(ch, ch), cnum::matmul(q.delta(), kb));
    std::vector<CMatrix> rk(n);
    for (std::size_t b = 0; b < n; ++b) rk[b] = cnum::matmul(right[b], kb);
    CMatrix ideal(n * n * c, kb.cols());
    for (std::size_t x = 0; x < n; ++x) {
      const CMatrix t = cnum::matmul(ch, left[x]);
      for (std::size_t b = 0; b < n; ++b) {
        const CMatrix blk = cnum::matmul(t, rk[b]);
        for (std::size_t r = 0; r < c; ++r)
          for (std::size_t k = 0; k < kb.cols(); ++k) ideal((x * n + b) * c + r, k) = blk(r, k);
      }
    }
    rows = cnum::vstack(rows, ideal);
    const Subspace y = cnum::nullspace(rows, tol, 1.0);
    if (y.dim() == out.J.dim()) break;
    out.J = y.dim() == 0 ? Subspace(n) : Subspace(n, cnum::matmul(kb, y.basis()));
  }
  return out;
}

Quotient quotient_by(const FiniteQuantumGroup& q, const Subspace& J, const Tolerance& tol) {
  const StarAlgebra& a = q.alg();
  const std::size_t n = a.dim();
  if (J.ambient_dim() != n) throw ShapeError("ideal lives in the wrong space");
  const std::size_t s = n - J.dim();
  if (s == 0) throw PreconditionError("cannot divide by the whole algebra");

  CMatrix w;
  if (J.dim() == 0) {
    w = CMatrix::identity(n);
  } else {
    const CMatrix g = staralg::gram(a, q.haar());
    w = cnum::nullspace(cnum::matmul(J.basis().adjoint(), g), tol).basis();
    if (w.cols() != s) throw ConsistencyError("Haar complement of the ideal has the wrong dimension");
  }
  const CMatrix pi = J.dim() == 0 ? CMatrix::identity(n) : cnum::inverse(cnum::hstack(w, J.basis())).block(0, 0, s, n);

  std::vector<Vector> ws(s);
  for (std::size_t k = 0; k < s; ++k) ws[k] = w.col(k);
  CMatrix mult(s, s * s), inv(s, s);
  for (std::size_t k = 0; k < s; ++k) {
    for (std::size_t l = 0; l < s; ++l) {
      const Vector p = cnum::matvec(pi, a.multiply(ws[k], ws[l]));
      for (std::size_t r = 0; r < s; ++r) mult(r, k * s + l) = p[r];
    }
    inv.set_col(k, cnum::matvec(pi, a.star(ws[k])));
  }
  const StarAlgebra alg = StarAlgebra::from_mult_matrix(mult, cnum::matvec(pi, a.unit()), inv);
  const CMatrix delta = cnum::matmul(cnum::kron(pi, pi), cnum::matmul(q.delta(), w));
  const Vector counit = cnum::vecmat(q.counit(), w);
  const CMatrix antipode = cnum::matmul(pi, cnum::matmul(q.antipode(), w));
  const StateFunctional haar = fqg::haar_by_invariance(alg, delta, tol);
  return {FiniteQuantumGroup(alg, delta, counit, antipode, haar), StarHom{a, alg, pi}, w};
}

HopfImageResult hopf_image(const FiniteQuantumGroup& q, const StarHom& L, const HopfImageOptions& opt) {
  opt.tol.validate();
  require_hom_from(q, L, opt.tol);
  HopfImageResult r;
  r.method = opt.method;
  KernelSearch found;
  switch (opt.method) {
    case Method::kernel:
      found = kernel_intersection(q, L, opt.window, opt.max_depth, opt.tol);
      break;
    case Method::coideal:
      found = coideal_fixed_point(q, L, opt.tol);
      break;
    case Method::both: {
      auto kf = std::async(std::launch::async,
                           [&] { return kernel_intersection(q, L, opt.window, opt.max_depth, opt.tol); });
      KernelSearch c = coideal_fixed_point(q, L, opt.tol);
      KernelSearch k = kf.get();
      r.kernel_dim = q.dim() - k.J.dim();
      r.coideal_dim = q.dim() - c.J.dim();
      if (k.J.dim() != c.J.dim())
        throw ConsistencyError("kernel method gives dim S = " + std::to_string(*r.kernel_dim) +
                               " but coideal method gives dim S = " + std::to_string(*r.coideal_dim));
      const double gap = cnum::span_distance(k.J, c.J);
      if (gap > std::sqrt(opt.tol.eps_rank))
        throw ConsistencyError("kernel and coideal methods agree on dimension but not on the ideal (distance " +
                               std::to_string(gap) + ")");
      found = std::move(c);
      found.depth = std::max(found.depth, k.depth);
      break;
    }
  }
  r.J = std::move(found.J);
  r.n_stabilized = found.depth;

  Quotient quot = quotient_by(q, r.J, opt.tol);
  r.quotient = std::move(quot.group);
  r.pi = std::move(quot.pi);
  r.theta = StarHom{r.quotient.alg(), L.target, cnum::matmul(L.matrix, quot.section)};

  const CMatrix& jb = r.J.basis();
  if (r.J.dim() > 0) {
    r.residuals.ideal = ideal_residual(q.alg(), r.J, opt.tol);
    r.residuals.coideal = cnum::matmul(cnum::kron(r.pi.matrix, r.pi.matrix), cnum::matmul(q.delta(), jb)).max_abs();
    r.residuals.counit = cnum::max_abs(cnum::vecmat(q.counit(), jb));
  }
  r.residuals.factorization = cnum::max_abs_diff(cnum::matmul(r.theta.matrix, r.pi.matrix), L.matrix) /
                              span_scale(L.matrix);
  r.residuals.quotient = r.quotient.check(opt.tol).worst();
  return r;
}

QuantumSubgroup restriction_subgroup(const grouporacle::FiniteGroup& g, std::span<const grouporacle::Element> members) {
  grouporacle::Subgroup s(members.begin(), members.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (!grouporacle::is_subgroup(g, s)) throw PreconditionError("elements do not form a subgroup");
  const grouporacle::Embedded e = grouporacle::subgroup_as_group(g, s);
  const FiniteQuantumGroup h = FiniteQuantumGroup::function_algebra(e.group);
  CMatrix m(e.group.order(), g.order());
  for (std::size_t k = 0; k < e.embedding.size(); ++k) m(k, e.embedding[k]) = 1.0;
  return {h, StarHom{StarAlgebra::function_algebra(g), h.alg(), m}};
}

QuantumSubgroup dual_quotient_subgroup(const grouporacle::FiniteGroup& g, std::span<const grouporacle::Element> normal) {
  grouporacle::Subgroup s(normal.begin(), normal.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (!grouporacle::is_subgroup(g, s) || !grouporacle::is_normal(g, s))
    throw PreconditionError("elements do not form a normal subgroup");
  const grouporacle::Quotient quo = grouporacle::quotient(g, s);
  const FiniteQuantumGroup h = FiniteQuantumGroup::group_algebra(quo.group);
  CMatrix m(quo.group.order(), g.order());
  for (grouporacle::Element x = 0; x < g.order(); ++x) m(quo.coset_of[x], x) = 1.0;
  return {h, StarHom{StarAlgebra::group_algebra(g), h.alg(), m}};
}

double morphism_residual(const FiniteQuantumGroup& a, const FiniteQuantumGroup& b, const CMatrix& pi) {
  if (pi.rows() != b.dim() || pi.cols() != a.dim()) throw ShapeError("morphism matrix has the wrong shape");
  return cnum::max_abs_diff(cnum::matmul(cnum::kron(pi, pi), a.delta()), cnum::matmul(b.delta(), pi));
}

GeneratedSubgroup generated_subgroup(const FiniteQuantumGroup& q, std::span<const QuantumSubgroup> subgroups,
                                     const HopfImageOptions& opt) {
  if (subgroups.empty()) throw ArgumentError("need at least one subgroup");
  std::vector<CMatrix> rows;
  StarAlgebra target;
  for (std::size_t i = 0; i < subgroups.size(); ++i) {
    const QuantumSubgroup& h = subgroups[i];
    require_hom_from(q, h.map, opt.tol);
    if (h.map.target.dim() != h.group.dim()) throw PreconditionError("subgroup map does not land in the subgroup");
    const double res = morphism_residual(q, h.group, h.map.matrix);
    if (res > opt.tol.eps_eq) throw PreconditionError("subgroup map does not intertwine the coproducts");
    if (cnum::rank(h.map.matrix, opt.tol) != h.group.dim()) throw PreconditionError("subgroup map is not surjective");
    rows.push_back(h.map.matrix);
    target = i == 0 ? h.group.alg() : StarAlgebra::direct_sum(target, h.group.alg());
  }
  const StarHom lambda{q.alg(), target, direct_sum_rows(rows)};
  GeneratedSubgroup out{hopf_image(q, lambda, opt), {}, {}, {}};
  std::size_t offset = 0;
  for (const QuantumSubgroup& h : subgroups) {
    const std::size_t d = h.group.dim();
    StarHom part{out.image.quotient.alg(), h.group.alg(), out.image.theta.matrix.block(offset, 0, d, out.image.dim())};
    out.theta_morphism_residuals.push_back(morphism_residual(out.image.quotient, h.group, part.matrix));
    out.theta_surjective.push_back(cnum::rank(part.matrix, opt.tol) == d);
    out.theta_parts.push_back(std::move(part));
    offset += d;
  }
  return out;
}

InnerFaithfulResult inner_faithful(const FiniteQuantumGroup& q, const StarHom& L, const StateFunctional& phi_B,
                                   double cesaro_tol, std::size_t max_iter, const Tolerance& tol) {
  require_hom_from(q, L, tol);
  if (phi_B.coeffs.size() != L.target.dim()) throw ShapeError("state does not live on the target algebra");
  if (!staralg::check_state(L.target, phi_B, tol).faithful) throw PreconditionError("state on the target is not faithful");
  const Vector omega = cnum::vecmat(phi_B.coeffs, L.matrix);
  const fqg::CesaroResult c = fqg::cesaro_mean(q, omega, cesaro_tol, max_iter, fqg::CesaroMode::doubling, tol);
  InnerFaithfulResult r;
  Vector diff = c.mean;
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= q.haar().coeffs[i];
  r.haar_distance = cnum::norm2(diff);
  r.inner_faithful = r.haar_distance <= kInnerFaithfulThreshold;
  r.cesaro_iterations = c.iterations;
  r.idempotency = c.idempotency;
  r.hopf_image_dim = q.dim() - coideal_fixed_point(q, L, tol).J.dim();
  r.agrees_with_hopf_image = r.inner_faithful == (r.hopf_image_dim == q.dim());
  return r;
}

std::size_t dual_generated_dim(const FiniteQuantumGroup& q, std::span<const QuantumSubgroup> subgroups,
                               const Tolerance& tol) {
  const std::size_t n = q.dim();
  const FiniteQuantumGroup d = fqg::dual(q, tol);
  const StarAlgebra& da = d.alg();
  std::vector<Vector> gens{da.unit()};
  for (const QuantumSubgroup& h : subgroups) {
    if (h.map.matrix.cols() != n) throw ShapeError("subgroup map does not start at the quantum group's algebra");
    const CMatrix t = h.map.matrix.transpose();
    for (std::size_t k = 0; k < t.cols(); ++k) gens.push_back(t.col(k));
  }
  Subspace v = cnum::span_of(gens, n, tol);
  for (;;) {
    std::vector<Vector> more;
    for (std::size_t i = 0; i < v.dim(); ++i) {
      const Vector x = v.vector(i);
      more.push_back(x);
      more.push_back(da.star(x));
      for (std::size_t j = 0; j < v.dim(); ++j) more.push_back(da.multiply(x, v.vector(j)));
      const Vector dx = d.coproduct(x);
      CMatrix legs(n, n, dx);
      for (std::size_t k = 0; k < n; ++k) {
        more.push_back(legs.col(k));
        more.push_back(Vector(legs.row_span(k).begin(), legs.row_span(k).end()));
      }
    }
    Subspace next = cnum::span_of(more, n, tol);
    if (next.dim() == v.dim()) return v.dim();
    v = std::move(next);
  }
}

FamilyImage generated_from_family(const qfam::QuantumFamily& f, const FiniteQuantumGroup& q_host,
                                  const qfam::QuantumFamily& action, const HopfImageOptions& opt) {
  const Tolerance& tol = opt.tol;
  const StarAlgebra& a = q_host.alg();
  const std::size_t n = action.n();
  if (action.index().dim() != a.dim() ||
      cnum::max_abs_diff(action.index().mult_matrix(), a.mult_matrix()) > tol.eps_eq)
    throw PreconditionError("action is not indexed by the host algebra");
  const qfam::FamilyCheckReport rep = qfam::check_family(action, tol);
  if (!rep.is_star_hom() || !rep.podles_full || !rep.state_preserved)
    throw PreconditionError("action is not a state-preserving Podles family");
  if (f.n() != n || cnum::max_abs_diff(f.source().onb.change, action.source().onb.change) > tol.eps_eq ||
      cnum::max_abs_diff(f.source().phi.coeffs, action.source().phi.coeffs) > tol.eps_eq)
    throw ArgumentError("family and action act on different quantum spaces");

  const StarAlgebra& b = f.index();
  struct Pair {
    Vector x, y;
  };
  std::vector<Pair> gens;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      gens.push_back({action.b(i, j), f.b(i, j)});
      gens.push_back({a.star(action.b(i, j)), b.star(f.b(i, j))});
    }

  // Words in the coefficients, kept while they enlarge the span in the host.
  std::vector<Pair> basis;
  std::vector<Vector> ortho;
  std::vector<Pair> checks;
  auto admit = [&](Pair p) {
    Vector r = p.x;
    for (const Vector& e : ortho) {
      Complex c = 0;
      for (std::size_t k = 0; k < r.size(); ++k) c += std::conj(e[k]) * r[k];
      for (std::size_t k = 0; k < r.size(); ++k) r[k] -= c * e[k];
    }
    const double norm = cnum::norm2(r), scale = std::max(1.0, cnum::norm2(p.x));
    if (norm <= tol.eps_rank * scale) {
      checks.push_back(std::move(p));
      return;
    }
    for (auto& c : r) c /= norm;
    ortho.push_back(std::move(r));
    basis.push_back(std::move(p));
  };
  admit({a.unit(), b.unit()});
  for (std::size_t idx = 0; idx < basis.size() && basis.size() < a.dim(); ++idx)
    for (const Pair& g : gens) {
      admit({a.multiply(basis[idx].x, g.x), b.multiply(basis[idx].y, g.y)});
      if (basis.size() == a.dim()) break;
    }
  if (basis.size() != a.dim()) throw PreconditionError("action coefficients do not generate the host algebra");
  // Remaining products of basis words by generators, for the consistency test.
  for (const Pair& p : basis)
    for (const Pair& g : gens) checks.push_back({a.multiply(p.x, g.x), b.multiply(p.y, g.y)});

  CMatrix xs(a.dim(), a.dim()), ys(b.dim(), a.dim());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    xs.set_col(k, basis[k].x);
    ys.set_col(k, basis[k].y);
  }
  const StarHom lambda{a, b, cnum::matmul(ys, cnum::inverse(xs))};
  double mismatch = 0;
  for (const Pair& p : checks)
    mismatch = std::max(mismatch, cnum::max_abs_diff(lambda.apply(p.x), p.y) / std::max(1.0, cnum::max_abs(p.y)));
  const double allowed = qfam::kCompositionSlack * qfam::kCompositionSlack * tol.eps_eq;
  if (mismatch > allowed)
    throw ArgumentError("family does not factor through the action by a homomorphism (mismatch " +
                        std::to_string(mismatch) + ")");

  HopfImageResult image = hopf_image(q_host, lambda, opt);
  std::vector<Vector> reduced(n * n);
  double fact = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      reduced[i * n + j] = image.pi.apply(action.b(i, j));
      fact = std::max(fact, cnum::max_abs_diff(image.theta.apply(reduced[i * n + j]), f.b(i, j)));
    }
  qfam::QuantumFamily beta_bar(action.source(), image.quotient.alg(), std::move(reduced));
  return {std::move(image), lambda, std::move(beta_bar), fact};
}

std::optional<bool> group_derived_isomorphic(const FiniteQuantumGroup& a, const FiniteQuantumGroup& b,
                                             const Tolerance& tol) {
  if (a.dim() != b.dim()) return false;
  const bool ca = a.alg().is_commutative(tol), cb = b.alg().is_commutative(tol);
  if (ca != cb) return false;
  const bool da = a.is_cocommutative(tol), db = b.is_cocommutative(tol);
  if (da != db) return false;
  if (ca) {
    const auto ga = fqg::character_group(a, tol), gb = fqg::character_group(b, tol);
    if (!ga || !gb) return std::nullopt;
    return grouporacle::is_isomorphic(ga->group, gb->group);
  }
  if (da) {
    const auto ga = fqg::grouplike_group(a, tol), gb = fqg::grouplike_group(b, tol);
    if (!ga || !gb) return std::nullopt;
    return grouporacle::is_isomorphic(*ga, *gb);
  }
  return std::nullopt;
}

}  // namespace qsym::hopfimage
