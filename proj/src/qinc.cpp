#include "qsym/qinc.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "qsym/errors.hpp"

namespace qsym::qinc {

using cnum::Complex;
using cnum::Vector;

namespace {

void check_shape(const IncreasingSequenceRep& rep) {
  if (rep.k == 0 || rep.k > rep.n) throw ShapeError("need 1 <= k <= n");
  if (rep.d == 0) throw ShapeError("representation dimension must be positive");
  if (rep.v.size() != rep.n * rep.k) throw ShapeError("v must hold n*k matrices");
  for (const CMatrix& m : rep.v)
    if (m.rows() != rep.d || m.cols() != rep.d) throw ShapeError("every v_ij must be d x d");
}

std::string where(std::size_t i, std::size_t j) { return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"; }

// v with the boundary values v_00 = 1, v_i0 = v_0i = v_{i,k+1} = 0; indices
// here are the 1-based ones of the completion formula.
class Padded {
 public:
  explicit Padded(const IncreasingSequenceRep& rep)
      : rep_(rep), zero_(rep.d, rep.d), one_(CMatrix::identity(rep.d)) {}

  const CMatrix& operator()(std::size_t i, std::size_t j) const {
    if (i == 0 && j == 0) return one_;
    if (i == 0 || j == 0 || j == rep_.k + 1) return zero_;
    return rep_.at(i - 1, j - 1);
  }

 private:
  const IncreasingSequenceRep& rep_;
  CMatrix zero_, one_;
};

CMatrix vec_to_matrix(std::span<const Complex> v, std::size_t d) { return CMatrix(d, d, Vector(v.begin(), v.end())); }

}  // namespace

double ValidationReport::worst() const { return std::max({projection, column_sums, orthogonality, vanishing}); }

ValidationReport validate(const IncreasingSequenceRep& rep) {
  check_shape(rep);
  ValidationReport r;
  const std::size_t n = rep.n, k = rep.k;
  const CMatrix id = CMatrix::identity(rep.d);
  double worst = -1;
  auto note = [&](double value, const std::string& what) {
    if (value > worst) {
      worst = value;
      r.worst_relation = what;
    }
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const CMatrix& v = rep.at(i, j);
      const double res = std::max(cnum::max_abs_diff(cnum::matmul(v, v), v), cnum::max_abs_diff(v, v.adjoint()));
      r.projection = std::max(r.projection, res);
      note(res, "v" + where(i, j) + " is not a projection");
      if (j > i || i > n - k + j) {
        r.vanishing = std::max(r.vanishing, v.max_abs());
        note(v.max_abs(), "v" + where(i, j) + " should vanish");
      }
    }
  for (std::size_t j = 0; j < k; ++j) {
    CMatrix sum(rep.d, rep.d);
    for (std::size_t i = 0; i < n; ++i) sum += rep.at(i, j);
    const double res = cnum::max_abs_diff(sum, id);
    r.column_sums = std::max(r.column_sums, res);
    note(res, "column " + std::to_string(j + 1) + " does not sum to 1");
  }
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t jj = j + 1; jj < k; ++jj)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t ii = 0; ii <= i; ++ii) {
          const double res = cnum::matmul(rep.at(i, j), rep.at(ii, jj)).max_abs();
          r.orthogonality = std::max(r.orthogonality, res);
          note(res, "v" + where(i, j) + " v" + where(ii, jj) + " != 0");
        }
  return r;
}

double magic_residual(const MagicUnitaryRep& m) { return qfam::magic_unitary_residual(m.p, m.n); }

IncreasingSequenceRep classical_rep(std::span<const std::size_t> seq, std::size_t n) {
  if (seq.empty() || seq.size() > n) throw ArgumentError("sequence length must be between 1 and n");
  for (std::size_t j = 0; j < seq.size(); ++j) {
    if (seq[j] < 1 || seq[j] > n) throw ArgumentError("sequence values must lie in 1..n");
    if (j > 0 && seq[j] <= seq[j - 1]) throw ArgumentError("sequence must be strictly increasing");
  }
  IncreasingSequenceRep rep{n, seq.size(), 1, std::vector<CMatrix>(n * seq.size(), CMatrix(1, 1))};
  for (std::size_t j = 0; j < seq.size(); ++j) rep.at(seq[j] - 1, j)(0, 0) = 1.0;
  return rep;
}

std::vector<std::vector<std::size_t>> increasing_sequences(std::size_t k, std::size_t n) {
  if (k == 0 || k > n) throw ArgumentError("need 1 <= k <= n");
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> s(k);
  for (std::size_t j = 0; j < k; ++j) s[j] = j + 1;
  for (;;) {
    out.push_back(s);
    std::size_t j = k;
    while (j > 0 && s[j - 1] == n - k + j) --j;
    if (j == 0) return out;
    ++s[j - 1];
    for (std::size_t t = j; t < k; ++t) s[t] = s[t - 1] + 1;
  }
}

std::vector<IncreasingSequenceRep> enumerate(std::size_t k, std::size_t n) {
  std::vector<IncreasingSequenceRep> out;
  for (const auto& s : increasing_sequences(k, n)) out.push_back(classical_rep(s, n));
  return out;
}

MagicUnitaryRep complete(const IncreasingSequenceRep& rep, const Tolerance& tol) {
  const ValidationReport vr = validate(rep);
  if (!vr.ok(tol)) throw PreconditionError("not a quantum increasing sequence: " + vr.worst_relation);
  const std::size_t n = rep.n, k = rep.k, d = rep.d;
  MagicUnitaryRep out{n, d, std::vector<CMatrix>(n * n, CMatrix(d, d))};
  auto p = [&](std::size_t i, std::size_t j) -> CMatrix& { return out.p[(i - 1) * n + (j - 1)]; };
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= k; ++j) p(i, j) = rep.at(i - 1, j - 1);
  // Columns k+m: entries above row m and below row m+k stay zero.
  const Padded v(rep);
  for (std::size_t m = 1; m <= n - k; ++m)
    for (std::size_t q = 0; q <= k; ++q) {
      CMatrix& target = p(q + m, k + m);
      for (std::size_t i = 0; i + 1 <= m + q; ++i) {
        target += v(i, q);
        target -= v(i + 1, q + 1);
      }
    }
  const double res = magic_residual(out);
  if (res > 10.0 * tol.eps_eq)
    throw ConsistencyError("completion is not a magic unitary (residual " + std::to_string(res) + ")");
  return out;
}

std::optional<grouporacle::Permutation> as_permutation(const MagicUnitaryRep& m, const Tolerance& tol) {
  if (m.d != 1) return std::nullopt;
  std::vector<grouporacle::Element> images(m.n, 0);
  for (std::size_t j = 0; j < m.n; ++j) {
    std::size_t ones = 0;
    for (std::size_t i = 0; i < m.n; ++i) {
      const Complex x = m.at(i, j)(0, 0);
      if (std::abs(x - 1.0) <= tol.eps_eq) {
        images[j] = static_cast<grouporacle::Element>(i);
        ++ones;
      } else if (std::abs(x) > tol.eps_eq) {
        return std::nullopt;
      }
    }
    if (ones != 1) return std::nullopt;
  }
  try {
    return grouporacle::Permutation(std::move(images));
  } catch (const ArgumentError&) {
    return std::nullopt;
  }
}

qfam::QuantumFamily completion_family(const IncreasingSequenceRep& rep, const Tolerance& tol) {
  const MagicUnitaryRep m = complete(rep, tol);
  return qfam::family_from_magic_unitary(m.p, m.n, tol);
}

S4Check s4_generation_check(bool drop_identity) {
  S4Check out;
  std::vector<grouporacle::Permutation> gens;
  for (const IncreasingSequenceRep& rep : enumerate(2, 4)) {
    const auto s = as_permutation(complete(rep));
    if (!s) throw ConsistencyError("classical completion is not a permutation matrix");
    out.completed.push_back(*s);
    if (!(drop_identity && s->is_identity())) gens.push_back(*s);
  }
  out.order = gens.empty() ? 1 : grouporacle::closure(gens, 4).order();
  out.is_S4 = out.order == 24;
  return out;
}

IncreasingSequenceRep free_pair_rep(const CMatrix& p1, const CMatrix& p2, const CMatrix& q1, const CMatrix& q2,
                                    const Tolerance& tol) {
  const std::size_t d = p1.rows();
  const std::pair<const char*, const CMatrix*> named[] = {{"p1", &p1}, {"p2", &p2}, {"q1", &q1}, {"q2", &q2}};
  for (const auto& [name, m] : named) {
    if (m->rows() != d || m->cols() != d) throw ShapeError("p1, p2, q1, q2 must be square of one size");
    const double res = std::max(cnum::max_abs_diff(cnum::matmul(*m, *m), *m), cnum::max_abs_diff(*m, m->adjoint()));
    if (res > tol.eps_eq) throw PreconditionError(std::string(name) + " is not a projection");
  }
  const std::tuple<const char*, const CMatrix*, const CMatrix*> relations[] = {
      {"p1 p2 = 0", &p1, &p2}, {"q1 q2 = 0", &q1, &q2}, {"p1 q1 = 0", &p1, &q1},
      {"p2 q2 = 0", &p2, &q2}, {"q1 p2 = 0", &q1, &p2}};
  for (const auto& [name, a, b] : relations) {
    const double res = cnum::matmul(*a, *b).max_abs();
    if (res > tol.eps_eq) throw PreconditionError(std::string("relation ") + name + " fails (residual " + std::to_string(res) + ")");
  }
  const CMatrix id = CMatrix::identity(d);
  IncreasingSequenceRep rep{4, 2, d, std::vector<CMatrix>(8, CMatrix(d, d))};
  rep.at(0, 0) = id - p1 - p2;
  rep.at(1, 0) = p1;
  rep.at(2, 0) = p2;
  rep.at(1, 1) = q1;
  rep.at(2, 1) = q2;
  rep.at(3, 1) = id - q1 - q2;
  return rep;
}

FreePair tilted_free_pair(double t, const CMatrix& u) {
  if (!(t >= 0 && t <= 1)) throw ArgumentError("t must lie in [0, 1]");
  const double s = std::sqrt(t * (1 - t));
  FreePair out;
  out.t = t;
  out.p1 = CMatrix{{1.0, 0.0}, {0.0, 0.0}};
  out.q2 = CMatrix{{t, s}, {s, 1 - t}};
  out.p2 = CMatrix(2, 2);
  out.q1 = CMatrix(2, 2);
  if (!u.empty()) {
    if (u.rows() != 2 || u.cols() != 2) throw ShapeError("conjugating unitary must be 2 x 2");
    out.p1 = cnum::matmul(cnum::matmul(u, out.p1), u.adjoint());
    out.q2 = cnum::matmul(cnum::matmul(u, out.q2), u.adjoint());
  }
  out.rep = free_pair_rep(out.p1, out.p2, out.q1, out.q2);
  return out;
}

FreePair random_free_pair(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double t = unif(rng);
  while (t == 0.0) t = unif(rng);
  std::normal_distribution<double> g;
  CMatrix x(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) x(i, j) = {g(rng), g(rng)};
  return tilted_free_pair(t, cnum::hermitian_eigen(x + x.adjoint()).vectors);
}

GrowthResult coefficient_growth(const IncreasingSequenceRep& rep, std::size_t N, const GrowthOptions& opt,
                                const Tolerance& tol) {
  if (N == 0) throw ArgumentError("need at least one composition level");
  if (opt.degree_cap == 0 || opt.dim_cap == 0) throw ArgumentError("growth caps must be positive");
  const MagicUnitaryRep p = complete(rep, tol);
  const std::size_t n = p.n;
  GrowthResult out;
  out.degree_cap = opt.degree_cap;
  out.dim_cap = opt.dim_cap;
  std::vector<CMatrix> coeff = p.p;
  for (std::size_t m = 1; m <= N; ++m) {
    if (m > 1) {
      std::vector<CMatrix> next(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          CMatrix s;
          for (std::size_t t = 0; t < n; ++t) {
            const CMatrix term = cnum::kron(coeff[i * n + t], p.at(t, j));
            if (s.empty()) s = term;
            else s += term;
          }
          next[i * n + j] = std::move(s);
        }
      coeff = std::move(next);
    }
    const std::size_t dd = coeff.front().rows();
    // Reduce the generators to a basis of their span.
    std::vector<Vector> raw;
    for (const CMatrix& c : coeff) raw.emplace_back(c.entries().begin(), c.entries().end());
    const cnum::Subspace gspan = cnum::span_of(raw, dd * dd, tol);
    std::vector<CMatrix> gens;
    for (std::size_t g = 0; g < gspan.dim(); ++g) gens.push_back(vec_to_matrix(gspan.vector(g), dd));

    std::vector<Vector> basis;  // orthonormal, vectorized
    std::vector<CMatrix> frontier;
    auto admit = [&](const CMatrix& x) {
      Vector r(x.entries().begin(), x.entries().end());
      const double scale = std::max(1.0, cnum::norm2(r));
      for (int pass = 0; pass < 2; ++pass)
        for (const Vector& e : basis) {
          Complex c = 0;
          for (std::size_t t = 0; t < r.size(); ++t) c += std::conj(e[t]) * r[t];
          for (std::size_t t = 0; t < r.size(); ++t) r[t] -= c * e[t];
        }
      const double norm = cnum::norm2(r);
      if (norm <= tol.eps_rank * scale) return false;
      for (auto& c : r) c /= norm;
      basis.push_back(std::move(r));
      return true;
    };
    admit(CMatrix::identity(dd));
    frontier.push_back(CMatrix::identity(dd));
    bool truncated = false;
    for (std::size_t degree = 1; !frontier.empty(); ++degree) {
      if (degree > opt.degree_cap) {
        truncated = true;
        break;
      }
      std::vector<CMatrix> grown;
      for (const CMatrix& w : frontier) {
        for (const CMatrix& g : gens) {
          CMatrix x = cnum::matmul(w, g);
          if (admit(x)) grown.push_back(std::move(x));
          if (basis.size() >= opt.dim_cap) break;
        }
        if (basis.size() >= opt.dim_cap) break;
      }
      if (basis.size() >= opt.dim_cap && basis.size() < dd * dd) {
        truncated = true;
        break;
      }
      frontier = std::move(grown);
    }
    out.dims.push_back(basis.size());
    out.truncated.push_back(truncated);
  }
  return out;
}

}  // namespace qsym::qinc
