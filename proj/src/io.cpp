#include "qsym/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qsym/errors.hpp"

namespace qsym::io {

namespace {

using grouporacle::Element;
using grouporacle::FiniteGroup;
using grouporacle::Permutation;
using staralg::StarAlgebra;
using staralg::StarHom;

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ArgumentError(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

std::size_t count_from_json(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw ArgumentError(std::string(what) + " must be a non-negative integer");
  return j.get<std::size_t>();
}

std::size_t index_from_json(const json& j, std::size_t bound, const char* what) {
  if (!j.is_number_integer()) throw ArgumentError(std::string(what) + " must be an integer");
  const long long v = j.get<long long>();
  if (v < 1 || static_cast<std::size_t>(v) > bound)
    throw ArgumentError(std::string(what) + " " + std::to_string(v) + " out of range 1.." + std::to_string(bound));
  return static_cast<std::size_t>(v - 1);
}

// Run a loader and translate library JSON exceptions into ArgumentError.
template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ArgumentError(std::string(what) + ": " + e.what());
  }
}

std::vector<CMatrix> matrix_list(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ArgumentError(std::string(what) + " must be a non-empty array of matrices");
  std::vector<CMatrix> out;
  for (const auto& m : j) out.push_back(matrix_from_json(m));
  for (const auto& m : out)
    if (m.rows() != out.front().rows() || m.cols() != m.rows())
      throw ShapeError(std::string(what) + " must be square matrices of one size");
  return out;
}

Element element_from_json(const json& j, const FiniteGroup& g) {
  if (j.is_string()) {
    if (!g.permutations()) throw ArgumentError("cycle notation needs a permutation group");
    return g.index_of(Permutation::from_cycles(j.get<std::string>(), g.permutations()->front().degree()));
  }
  return static_cast<Element>(index_from_json(j, g.order(), "group element"));
}

std::vector<Element> elements_from_json(const json& j, const FiniteGroup& g) {
  std::vector<Element> out;
  if (j.is_array()) {
    for (const auto& x : j) out.push_back(element_from_json(x, g));
  } else {
    out.push_back(element_from_json(j, g));
  }
  return out;
}

const FiniteGroup& group_of(const LoadedFqg& q, FqgKind kind, const char* hom) {
  if (q.kind != kind || !q.group)
    throw ArgumentError(std::string("\"") + hom + "\" needs a " +
                        (kind == FqgKind::function_algebra ? "function_algebra_of" : "group_algebra_of") +
                        " quantum group");
  return *q.group;
}

StarHom matrix_hom(const StarAlgebra& source, const std::vector<CMatrix>& images) {
  const std::size_t d = images.front().rows();
  const std::size_t blocks[] = {d};
  const StarAlgebra target = StarAlgebra::from_blocks(blocks);
  CMatrix m(d * d, source.dim());
  for (std::size_t g = 0; g < images.size(); ++g) {
    const Vector c = qfam::matrix_to_coords(images[g]);
    for (std::size_t r = 0; r < c.size(); ++r) m(r, g) = c[r];
  }
  return StarHom{source, target, m};
}

}  // namespace

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ArgumentError("complex scalar must be a number or [re, im]");
}

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Vector vector_from_json(const json& j) {
  if (!j.is_array()) throw ArgumentError("vector must be an array");
  Vector v;
  v.reserve(j.size());
  for (const auto& x : j) v.push_back(complex_from_json(x));
  return v;
}

json to_json(std::span<const Complex> v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(to_json(z));
  return out;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw ArgumentError("matrix must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? 0 : (j[0].is_array() ? j[0].size() : 0);
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ShapeError("matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = complex_from_json(j[i][c]);
  }
  if (!m.all_finite()) throw ArgumentError("matrix has non-finite entries");
  return m;
}

json to_json(const CMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(i, c)));
    out.push_back(std::move(row));
  }
  return out;
}

StarAlgebra algebra_from_json(const json& j) {
  return guarded("algebra", [&] {
    if (j.contains("blocks")) {
      std::vector<std::size_t> blocks;
      for (const auto& b : require(j, "blocks")) blocks.push_back(count_from_json(b, "block size"));
      if (blocks.empty() || std::count(blocks.begin(), blocks.end(), 0u) > 0)
        throw ArgumentError("blocks must be a non-empty list of positive sizes");
      return StarAlgebra::from_blocks(blocks);
    }
    if (j.contains("commutative")) {
      const std::size_t n = count_from_json(j.at("commutative"), "commutative");
      if (n == 0) throw ArgumentError("commutative must be positive");
      return StarAlgebra::commutative(n);
    }
    const std::size_t n = count_from_json(require(j, "dim"), "dim");
    const json& mult = require(j, "mult");
    if (n == 0 || !mult.is_array() || mult.size() != n) throw ShapeError("mult must be dim x dim x dim");
    std::vector<Complex> flat(n * n * n);
    for (std::size_t k = 0; k < n; ++k) {
      if (!mult[k].is_array() || mult[k].size() != n) throw ShapeError("mult must be dim x dim x dim");
      for (std::size_t l = 0; l < n; ++l) {
        const Vector v = vector_from_json(mult[k][l]);
        if (v.size() != n) throw ShapeError("mult must be dim x dim x dim");
        for (std::size_t p = 0; p < n; ++p) flat[p * n * n + k * n + l] = v[p];
      }
    }
    Vector unit = vector_from_json(require(j, "unit"));
    const CMatrix inv = matrix_from_json(require(j, "inv"));
    if (unit.size() != n || inv.rows() != n || inv.cols() != n) throw ShapeError("unit or inv has the wrong size");
    return StarAlgebra::from_structure(n, flat, std::move(unit), inv);
  });
}

json to_json(const StarAlgebra& a) {
  if (a.blocks()) return json{{"blocks", *a.blocks()}};
  const std::size_t n = a.dim();
  json mult = json::array();
  for (std::size_t k = 0; k < n; ++k) {
    json row = json::array();
    for (std::size_t l = 0; l < n; ++l) {
      Vector v(n);
      for (const auto& t : a.product(k, l)) v[t.index] += t.coeff;
      row.push_back(to_json(v));
    }
    mult.push_back(std::move(row));
  }
  return json{{"dim", n}, {"mult", std::move(mult)}, {"unit", to_json(a.unit())}, {"inv", to_json(a.inv_matrix())}};
}

staralg::StateFunctional state_from_json(const json& j, const StarAlgebra& a) {
  return guarded("state", [&] {
    if (j.contains("uniform")) {
      if (!a.blocks()) throw ArgumentError("\"uniform\" needs a block algebra");
      const auto& b = *a.blocks();
      double total = 0;
      for (auto m : b) total += static_cast<double>(m * m);
      std::vector<double> w;
      for (auto m : b) w.push_back(static_cast<double>(m * m) / total);
      return staralg::block_trace_state(a, w);
    }
    staralg::StateFunctional phi{vector_from_json(require(j, "coeffs"))};
    if (phi.coeffs.size() != a.dim()) throw ShapeError("state has the wrong length");
    return phi;
  });
}

json to_json(const staralg::StateFunctional& phi) { return json{{"coeffs", to_json(phi.coeffs)}}; }

FiniteGroup group_from_json(const json& j) {
  return guarded("group", [&] {
    auto small = [](const json& x, const char* what) {
      const std::size_t n = count_from_json(x, what);
      if (n == 0) throw ArgumentError(std::string(what) + " must be positive");
      return n;
    };
    if (j.contains("cyclic")) return FiniteGroup::cyclic(small(j.at("cyclic"), "cyclic"));
    if (j.contains("symmetric")) return FiniteGroup::symmetric(small(j.at("symmetric"), "symmetric"));
    if (j.contains("dihedral")) return FiniteGroup::dihedral(small(j.at("dihedral"), "dihedral"));
    if (j.contains("cayley")) {
      const json& t = j.at("cayley");
      if (!t.is_array()) throw ArgumentError("cayley must be an array of rows");
      std::vector<std::vector<Element>> table;
      for (const auto& row : t) {
        if (!row.is_array() || row.size() != t.size()) throw ShapeError("cayley table must be square");
        std::vector<Element> r;
        for (const auto& x : row) r.push_back(static_cast<Element>(index_from_json(x, t.size(), "cayley entry")));
        table.push_back(std::move(r));
      }
      return FiniteGroup(std::move(table));
    }
    const json& gens = require(j, "permutation_generators");
    if (!gens.is_array()) throw ArgumentError("permutation_generators must be an array");
    std::size_t degree = j.contains("degree") ? small(j.at("degree"), "degree") : 0;
    if (degree == 0) {
      for (const auto& x : gens) {
        if (x.is_array()) degree = std::max<std::size_t>(degree, x.size());
        if (x.is_string())
          for (const char* p = x.get_ref<const std::string&>().c_str(); *p;) {
            char* end = nullptr;
            const long v = std::strtol(p, &end, 10);
            if (end == p) ++p;
            else {
              degree = std::max<std::size_t>(degree, static_cast<std::size_t>(std::max(v, 0L)));
              p = end;
            }
          }
      }
      degree = std::max<std::size_t>(degree, 1);
    }
    std::vector<Permutation> perms;
    for (const auto& x : gens) {
      if (x.is_string()) {
        perms.push_back(Permutation::from_cycles(x.get<std::string>(), degree));
      } else {
        if (!x.is_array() || x.size() != degree) throw ShapeError("image lists must have length degree");
        std::vector<Element> img;
        for (const auto& v : x) img.push_back(static_cast<Element>(index_from_json(v, degree, "image")));
        perms.emplace_back(std::move(img));
      }
    }
    if (perms.empty()) perms.push_back(Permutation::identity(degree));
    return grouporacle::closure(perms, degree);
  });
}

json to_json(const FiniteGroup& g) {
  json table = json::array();
  for (const auto& row : g.cayley()) {
    json r = json::array();
    for (Element x : row) r.push_back(x + 1);
    table.push_back(std::move(r));
  }
  return json{{"cayley", std::move(table)}};
}

LoadedFqg fqg_from_json(const json& j, const Tolerance& tol) {
  return guarded("quantum group", [&] {
    LoadedFqg out;
    if (j.contains("function_algebra_of")) {
      out.group = group_from_json(j.at("function_algebra_of"));
      out.kind = FqgKind::function_algebra;
      out.q = fqg::FiniteQuantumGroup::function_algebra(*out.group);
      return out;
    }
    if (j.contains("group_algebra_of")) {
      out.group = group_from_json(j.at("group_algebra_of"));
      out.kind = FqgKind::group_algebra;
      out.q = fqg::FiniteQuantumGroup::group_algebra(*out.group);
      return out;
    }
    const StarAlgebra alg = algebra_from_json(require(j, "algebra"));
    const CMatrix delta = matrix_from_json(require(j, "delta"));
    const Vector counit = vector_from_json(require(j, "counit"));
    const CMatrix antipode = matrix_from_json(require(j, "antipode"));
    const staralg::StateFunctional haar = j.contains("haar") ? staralg::StateFunctional{vector_from_json(j.at("haar"))}
                                                             : fqg::haar_by_invariance(alg, delta, tol);
    out.q = fqg::FiniteQuantumGroup(alg, delta, counit, antipode, haar);
    const fqg::FqgReport rep = out.q.check(tol);
    if (!rep.ok(tol))
      throw PreconditionError("not a finite quantum group (worst residual " + std::to_string(rep.worst()) + ")");
    return out;
  });
}

json to_json(const fqg::FiniteQuantumGroup& q) {
  return json{{"algebra", to_json(q.alg())},
              {"delta", to_json(q.delta())},
              {"counit", to_json(q.counit())},
              {"antipode", to_json(q.antipode())},
              {"haar", to_json(q.haar().coeffs)}};
}

LoadedHom hom_from_json(const json& j, const LoadedFqg& lq, const Tolerance& tol) {
  return guarded("homomorphism", [&] {
    const fqg::FiniteQuantumGroup& q = lq.q;
    const StarAlgebra& a = q.alg();
    LoadedHom out;
    if (!j.is_object() || j.size() == 0) throw ArgumentError("homomorphism must be a JSON object");
    if (j.contains("matrix") && j.contains("target")) {
      out.kind = "matrix";
      out.hom = StarHom{a, algebra_from_json(j.at("target")), matrix_from_json(j.at("matrix"))};
    } else if (j.contains("counit")) {
      out.kind = "counit";
      const fqg::FiniteQuantumGroup triv = fqg::FiniteQuantumGroup::function_algebra(FiniteGroup::cyclic(1));
      CMatrix m(1, a.dim());
      for (std::size_t c = 0; c < a.dim(); ++c) m(0, c) = q.counit()[c];
      out.hom = StarHom{a, triv.alg(), m};
      out.subgroup = hopfimage::QuantumSubgroup{triv, out.hom};
      out.oracle_dim = 1;
    } else if (j.contains("identity")) {
      out.kind = "identity";
      out.hom = staralg::identity_hom(a);
      out.subgroup = hopfimage::QuantumSubgroup{q, out.hom};
      out.oracle_dim = a.dim();
    } else if (j.contains("evaluation")) {
      out.kind = "evaluation";
      const FiniteGroup& g = group_of(lq, FqgKind::function_algebra, "evaluation");
      out.elements = elements_from_json(j.at("evaluation"), g);
      CMatrix m(out.elements.size(), a.dim());
      for (std::size_t r = 0; r < out.elements.size(); ++r) m(r, out.elements[r]) = 1.0;
      out.hom = StarHom{a, StarAlgebra::commutative(out.elements.size()), m};
      out.oracle_dim = grouporacle::subgroup_generated(g, out.elements).size();
    } else if (j.contains("projections")) {
      out.kind = "projections";
      group_of(lq, FqgKind::function_algebra, "projections");
      const auto ps = matrix_list(j.at("projections"), "projections");
      if (ps.size() != a.dim()) throw ShapeError("need one projection per group element");
      out.hom = matrix_hom(a, ps);
    } else if (j.contains("character")) {
      out.kind = "character";
      const FiniteGroup& g = group_of(lq, FqgKind::group_algebra, "character");
      const Vector c = vector_from_json(j.at("character"));
      if (c.size() != g.order()) throw ShapeError("need one character value per group element");
      CMatrix m(1, a.dim());
      std::size_t kernel = 0;
      for (std::size_t x = 0; x < c.size(); ++x) {
        m(0, x) = c[x];
        if (std::abs(c[x] - Complex(1.0)) <= tol.eps_eq) ++kernel;
      }
      out.hom = StarHom{a, StarAlgebra::commutative(1), m};
      if (kernel > 0 && g.order() % kernel == 0) out.oracle_dim = g.order() / kernel;
    } else if (j.contains("unitaries")) {
      out.kind = "unitaries";
      group_of(lq, FqgKind::group_algebra, "unitaries");
      const auto us = matrix_list(j.at("unitaries"), "unitaries");
      if (us.size() != a.dim()) throw ShapeError("need one unitary per group element");
      out.hom = matrix_hom(a, us);
    } else if (j.contains("restriction")) {
      out.kind = "restriction";
      const FiniteGroup& g = group_of(lq, FqgKind::function_algebra, "restriction");
      out.elements = elements_from_json(j.at("restriction"), g);
      out.subgroup = hopfimage::restriction_subgroup(g, out.elements);
      out.hom = out.subgroup->map;
      out.oracle_dim = out.subgroup->group.dim();
    } else if (j.contains("dual_quotient")) {
      out.kind = "dual_quotient";
      const FiniteGroup& g = group_of(lq, FqgKind::group_algebra, "dual_quotient");
      out.elements = elements_from_json(j.at("dual_quotient"), g);
      out.subgroup = hopfimage::dual_quotient_subgroup(g, out.elements);
      out.hom = out.subgroup->map;
      out.oracle_dim = out.subgroup->group.dim();
    } else if (j.contains("subgroup")) {
      out.kind = "subgroup";
      const json& s = j.at("subgroup");
      const LoadedFqg h = fqg_from_json(require(s, "fqg"), tol);
      out.hom = StarHom{a, h.q.alg(), matrix_from_json(require(s, "matrix"))};
      out.subgroup = hopfimage::QuantumSubgroup{h.q, out.hom};
    } else {
      throw ArgumentError("unrecognized homomorphism description");
    }
    if (out.hom.matrix.rows() != out.hom.target.dim() || out.hom.matrix.cols() != a.dim())
      throw ShapeError("homomorphism matrix must be dim(target) x dim(source)");
    return out;
  });
}

qfam::QuantumFamily family_from_json(const json& j, const Tolerance& tol) {
  return guarded("family", [&] {
    if (j.contains("magic_unitary")) {
      const json& rows = j.at("magic_unitary");
      if (!rows.is_array() || rows.empty()) throw ArgumentError("magic_unitary must be an n x n array of matrices");
      const std::size_t n = rows.size();
      std::vector<Vector> coeffs;
      std::size_t d = 0;
      for (const auto& row : rows) {
        const auto ps = matrix_list(row, "magic_unitary row");
        if (ps.size() != n) throw ShapeError("magic_unitary must be square");
        if (d == 0) d = ps.front().rows();
        if (ps.front().rows() != d) throw ShapeError("magic_unitary entries must share one size");
        for (const auto& p : ps) coeffs.push_back(qfam::matrix_to_coords(p));
      }
      const std::size_t blocks[] = {d};
      return qfam::QuantumFamily(qfam::uniform_source(n, tol), StarAlgebra::from_blocks(blocks), std::move(coeffs));
    }
    if (j.contains("permutations")) {
      const std::size_t n = count_from_json(require(j, "n"), "n");
      std::vector<Permutation> perms;
      for (const auto& x : j.at("permutations")) {
        if (x.is_string()) {
          perms.push_back(Permutation::from_cycles(x.get<std::string>(), n));
        } else {
          std::vector<Element> img;
          for (const auto& v : x) img.push_back(static_cast<Element>(index_from_json(v, n, "image")));
          if (img.size() != n) throw ShapeError("image lists must have length n");
          perms.emplace_back(std::move(img));
        }
      }
      if (perms.empty()) throw ArgumentError("permutations must be non-empty");
      return qfam::permutation_family(perms, tol);
    }
    const json& src = require(j, "source");
    const StarAlgebra m = algebra_from_json(require(src, "algebra"));
    const staralg::StateFunctional phi = state_from_json(require(src, "state"), m);
    const json& idx = require(j, "index");
    const StarAlgebra b = algebra_from_json(idx.contains("algebra") ? idx.at("algebra") : idx);
    const json& c = require(j, "coeffs");
    const std::size_t n = m.dim();
    if (!c.is_array() || c.size() != n) throw ShapeError("coeffs must be n x n");
    std::vector<Vector> coeffs;
    for (const auto& row : c) {
      if (!row.is_array() || row.size() != n) throw ShapeError("coeffs must be n x n");
      for (const auto& v : row) {
        coeffs.push_back(vector_from_json(v));
        if (coeffs.back().size() != b.dim()) throw ShapeError("coefficient length differs from index dimension");
      }
    }
    return qfam::QuantumFamily(qfam::make_source(m, phi, tol), b, std::move(coeffs));
  });
}

json to_json(const qfam::QuantumFamily& f) {
  json coeffs = json::array();
  for (std::size_t i = 0; i < f.n(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < f.n(); ++j) row.push_back(to_json(f.b(i, j)));
    coeffs.push_back(std::move(row));
  }
  return json{{"source", {{"algebra", to_json(f.source().alg)}, {"state", to_json(f.source().phi)}}},
              {"index", {{"algebra", to_json(f.index())}}},
              {"coeffs", std::move(coeffs)}};
}

qinc::IncreasingSequenceRep rep_from_json(const json& j) {
  return guarded("increasing-sequence rep", [&] {
    qinc::IncreasingSequenceRep r;
    r.n = count_from_json(require(j, "n"), "n");
    r.k = count_from_json(require(j, "k"), "k");
    r.d = count_from_json(require(j, "d"), "d");
    if (r.k == 0 || r.k > r.n || r.d == 0) throw ArgumentError("need 1 <= k <= n and d >= 1");
    const json& v = require(j, "v");
    if (!v.is_array() || v.size() != r.n) throw ShapeError("v must have n rows");
    for (const auto& row : v) {
      if (!row.is_array() || row.size() != r.k) throw ShapeError("each row of v must have k matrices");
      for (const auto& m : row) {
        r.v.push_back(matrix_from_json(m));
        if (r.v.back().rows() != r.d || r.v.back().cols() != r.d) throw ShapeError("v entries must be d x d");
      }
    }
    return r;
  });
}

json to_json(const qinc::IncreasingSequenceRep& r) {
  json v = json::array();
  for (std::size_t i = 0; i < r.n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < r.k; ++j) row.push_back(to_json(r.at(i, j)));
    v.push_back(std::move(row));
  }
  return json{{"n", r.n}, {"k", r.k}, {"d", r.d}, {"v", std::move(v)}};
}

json to_json(const qinc::MagicUnitaryRep& m) {
  json p = json::array();
  for (std::size_t i = 0; i < m.n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.n; ++j) row.push_back(to_json(m.at(i, j)));
    p.push_back(std::move(row));
  }
  return json{{"n", m.n}, {"d", m.d}, {"p", std::move(p)}};
}

std::vector<std::size_t> sequence_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ArgumentError("sequence must be a non-empty array");
  std::vector<std::size_t> out;
  for (const auto& x : j) {
    out.push_back(count_from_json(x, "sequence entry"));
    if (out.back() == 0) throw ArgumentError("sequence entries are 1-based");
    if (out.size() > 1 && out[out.size() - 2] >= out.back()) throw ArgumentError("sequence must be strictly increasing");
  }
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ArgumentError(path.string() + ": " + e.what());
  }
}

std::uint64_t fnv1a(std::string_view data, std::uint64_t h) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex_digest(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json to_json(const Report& r) {
  return json{{"command", r.command},     {"inputs_digest", r.inputs_digest}, {"config", r.config},
              {"results", r.results},     {"residuals", r.residuals},         {"passed", r.passed},
              {"exit_code", r.exit_code}, {"wall_time", r.wall_time}};
}

Report report_from_json(const json& j) {
  auto typed = [&](const char* key, json::value_t t) -> const json& {
    const json& v = require(j, key);
    const bool ok = v.type() == t || (t == json::value_t::number_float && v.is_number()) ||
                    (t == json::value_t::number_integer && v.is_number_integer());
    if (!ok) throw ArgumentError(std::string("report key \"") + key + "\" has the wrong type");
    return v;
  };
  Report r;
  r.command = typed("command", json::value_t::string).get<std::string>();
  r.inputs_digest = typed("inputs_digest", json::value_t::string).get<std::string>();
  r.config = typed("config", json::value_t::object);
  r.results = typed("results", json::value_t::object);
  r.residuals = typed("residuals", json::value_t::object);
  r.passed = typed("passed", json::value_t::boolean).get<bool>();
  r.exit_code = typed("exit_code", json::value_t::number_integer).get<int>();
  r.wall_time = typed("wall_time", json::value_t::number_float).get<double>();
  for (const auto& [k, v] : r.residuals.items())
    if (!v.is_number() && !v.is_null()) throw ArgumentError("residual \"" + k + "\" is not a number");
  if (r.exit_code != 0 && r.exit_code != 2 && r.exit_code != 3 && r.exit_code != 4)
    throw ArgumentError("exit_code must be 0, 2, 3 or 4");
  if (r.passed != (r.exit_code == 0)) throw ArgumentError("passed and exit_code disagree");
  return r;
}

}  // namespace qsym::io
