#include "qsym/grouporacle.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "qsym/errors.hpp"

namespace qsym::grouporacle {

Permutation::Permutation(std::vector<Element> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (Element x : images_) {
    if (x >= images_.size() || seen[x]) throw ArgumentError("permutation images are not a bijection");
    seen[x] = true;
  }
}

Permutation Permutation::identity(std::size_t degree) {
  std::vector<Element> im(degree);
  std::iota(im.begin(), im.end(), Element{0});
  return Permutation(std::move(im));
}

Permutation Permutation::from_cycles(std::string_view cycles, std::size_t degree) {
  std::vector<Element> im(degree);
  std::iota(im.begin(), im.end(), Element{0});
  std::vector<bool> moved(degree, false);
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < cycles.size() && std::isspace(static_cast<unsigned char>(cycles[pos]))) ++pos;
  };
  skip_ws();
  while (pos < cycles.size()) {
    if (cycles[pos] != '(') throw ArgumentError("cycle notation: expected '(' in \"" + std::string(cycles) + "\"");
    ++pos;
    std::vector<Element> cyc;
    for (;;) {
      skip_ws();
      if (pos >= cycles.size()) throw ArgumentError("cycle notation: unterminated cycle");
      if (cycles[pos] == ')') {
        ++pos;
        break;
      }
      if (cycles[pos] == ',') {
        ++pos;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(cycles[pos])))
        throw ArgumentError("cycle notation: unexpected character '" + std::string(1, cycles[pos]) + "'");
      std::size_t v = 0;
      while (pos < cycles.size() && std::isdigit(static_cast<unsigned char>(cycles[pos])))
        v = v * 10 + static_cast<std::size_t>(cycles[pos++] - '0');
      if (v < 1 || v > degree) throw ArgumentError("cycle notation: point " + std::to_string(v) + " out of range");
      if (moved[v - 1]) throw ArgumentError("cycle notation: point " + std::to_string(v) + " repeated");
      moved[v - 1] = true;
      cyc.push_back(static_cast<Element>(v - 1));
    }
    for (std::size_t i = 0; i < cyc.size(); ++i) im[cyc[i]] = cyc[(i + 1) % cyc.size()];
    skip_ws();
  }
  return Permutation(std::move(im));
}

Permutation Permutation::inverse() const {
  std::vector<Element> im(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) im[images_[i]] = static_cast<Element>(i);
  return Permutation(std::move(im));
}

std::size_t Permutation::order() const {
  std::size_t ord = 1;
  std::vector<bool> seen(images_.size(), false);
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = images_[j]) {
      seen[j] = true;
      ++len;
    }
    ord = std::lcm(ord, len);
  }
  return ord;
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i) return false;
  return true;
}

std::string Permutation::to_cycles() const {
  std::ostringstream os;
  std::vector<bool> seen(images_.size(), false);
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (seen[i] || images_[i] == i) continue;
    os << '(';
    bool first = true;
    for (std::size_t j = i; !seen[j]; j = images_[j]) {
      seen[j] = true;
      if (!first) os << ' ';
      os << j + 1;
      first = false;
    }
    os << ')';
  }
  const std::string s = os.str();
  return s.empty() ? "()" : s;
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  if (a.degree() != b.degree()) throw ArgumentError("permutation degrees differ");
  std::vector<Element> im(a.degree());
  for (std::size_t x = 0; x < im.size(); ++x) im[x] = a.images_[b.images_[x]];
  Permutation p;
  p.images_ = std::move(im);
  return p;
}

FiniteGroup::FiniteGroup(std::vector<std::vector<Element>> cayley) : order_(cayley.size()) {
  const std::size_t n = order_;
  if (n == 0) throw ArgumentError("group must be nonempty");
  table_.resize(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    if (cayley[a].size() != n) throw ArgumentError("cayley table is not square");
    for (std::size_t b = 0; b < n; ++b) {
      if (cayley[a][b] >= n) throw ArgumentError("cayley entry out of range");
      table_[a * n + b] = cayley[a][b];
    }
  }
  bool found = false;
  for (std::size_t e = 0; e < n && !found; ++e) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) ok = mul(e, a) == a && mul(a, e) == a;
    if (ok) {
      identity_ = static_cast<Element>(e);
      found = true;
    }
  }
  if (!found) throw ArgumentError("cayley table has no identity");
  inverse_.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    bool ok = false;
    for (std::size_t b = 0; b < n && !ok; ++b) {
      if (mul(a, b) == identity_ && mul(b, a) == identity_) {
        inverse_[a] = static_cast<Element>(b);
        ok = true;
      }
    }
    if (!ok) throw ArgumentError("element " + std::to_string(a) + " has no inverse");
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c))) throw ArgumentError("cayley table is not associative");
}

std::size_t FiniteGroup::element_order(Element a) const {
  std::size_t k = 1;
  for (Element x = a; x != identity_; x = mul(x, a)) ++k;
  return k;
}

std::vector<std::vector<Element>> FiniteGroup::cayley() const {
  std::vector<std::vector<Element>> t(order_, std::vector<Element>(order_));
  for (std::size_t a = 0; a < order_; ++a)
    for (std::size_t b = 0; b < order_; ++b) t[a][b] = mul(a, b);
  return t;
}

Element FiniteGroup::index_of(const Permutation& p) const {
  if (!perms_) throw ArgumentError("group has no permutation realization");
  const auto it = std::lower_bound(perms_->begin(), perms_->end(), p);
  if (it == perms_->end() || *it != p) throw ArgumentError("permutation " + p.to_cycles() + " is not in the group");
  return static_cast<Element>(it - perms_->begin());
}

bool FiniteGroup::is_abelian() const {
  for (std::size_t a = 0; a < order_; ++a)
    for (std::size_t b = a + 1; b < order_; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

FiniteGroup FiniteGroup::cyclic(std::size_t n) {
  if (n == 0) throw ArgumentError("cyclic group order must be positive");
  std::vector<std::vector<Element>> t(n, std::vector<Element>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = static_cast<Element>((a + b) % n);
  return FiniteGroup(std::move(t));
}

FiniteGroup FiniteGroup::symmetric(std::size_t n) {
  if (n == 0) throw ArgumentError("symmetric group degree must be positive");
  std::vector<Permutation> gens;
  if (n >= 2) {
    std::vector<Element> sw(n), cyc(n);
    std::iota(sw.begin(), sw.end(), Element{0});
    std::swap(sw[0], sw[1]);
    for (std::size_t i = 0; i < n; ++i) cyc[i] = static_cast<Element>((i + 1) % n);
    gens = {Permutation(sw), Permutation(cyc)};
  }
  return closure(gens, n);
}

FiniteGroup FiniteGroup::dihedral(std::size_t n) {
  if (n < 3) throw ArgumentError("dihedral group needs n >= 3");
  std::vector<Element> rot(n), refl(n);
  for (std::size_t i = 0; i < n; ++i) {
    rot[i] = static_cast<Element>((i + 1) % n);
    refl[i] = static_cast<Element>((n - i) % n);
  }
  const std::vector<Permutation> gens = {Permutation(rot), Permutation(refl)};
  return closure(gens, n);
}

FiniteGroup FiniteGroup::direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const std::size_t na = a.order(), nb = b.order();
  std::vector<std::vector<Element>> t(na * nb, std::vector<Element>(na * nb));
  for (std::size_t x1 = 0; x1 < na; ++x1)
    for (std::size_t y1 = 0; y1 < nb; ++y1)
      for (std::size_t x2 = 0; x2 < na; ++x2)
        for (std::size_t y2 = 0; y2 < nb; ++y2)
          t[x1 * nb + y1][x2 * nb + y2] = static_cast<Element>(a.mul(x1, x2) * nb + b.mul(y1, y2));
  return FiniteGroup(std::move(t));
}

FiniteGroup FiniteGroup::from_permutations(std::vector<Permutation> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  const std::size_t n = elements.size();
  if (n == 0) throw ArgumentError("empty permutation group");
  std::map<Permutation, Element> idx;
  for (std::size_t i = 0; i < n; ++i) idx.emplace(elements[i], static_cast<Element>(i));
  std::vector<std::vector<Element>> t(n, std::vector<Element>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const auto it = idx.find(elements[a] * elements[b]);
      if (it == idx.end()) throw ArgumentError("permutations are not closed under composition");
      t[a][b] = it->second;
    }
  FiniteGroup g(std::move(t));
  g.perms_ = std::move(elements);
  return g;
}

FiniteGroup closure(std::span<const Permutation> generators, std::size_t degree) {
  for (const auto& p : generators)
    if (p.degree() != degree) throw ArgumentError("generator degree differs from " + std::to_string(degree));
  std::set<Permutation> seen = {Permutation::identity(degree)};
  std::deque<Permutation> frontier = {Permutation::identity(degree)};
  while (!frontier.empty()) {
    const Permutation x = frontier.front();
    frontier.pop_front();
    for (const auto& g : generators) {
      Permutation y = x * g;
      if (seen.insert(y).second) {
        if (seen.size() > kClosureBound)
          throw BoundError("closure exceeds " + std::to_string(kClosureBound) + " elements");
        frontier.push_back(std::move(y));
      }
    }
  }
  return FiniteGroup::from_permutations({seen.begin(), seen.end()});
}

bool is_subgroup(const FiniteGroup& g, const Subgroup& s) {
  if (s.empty()) return false;
  std::vector<bool> in(g.order(), false);
  for (Element x : s) {
    if (x >= g.order()) return false;
    in[x] = true;
  }
  if (!in[g.identity()]) return false;
  for (Element a : s)
    for (Element b : s)
      if (!in[g.mul(a, g.inverse(b))]) return false;
  return true;
}

bool is_normal(const FiniteGroup& g, const Subgroup& s) {
  if (!is_subgroup(g, s)) return false;
  std::vector<bool> in(g.order(), false);
  for (Element x : s) in[x] = true;
  for (Element x = 0; x < g.order(); ++x)
    for (Element h : s)
      if (!in[g.mul(g.mul(x, h), g.inverse(x))]) return false;
  return true;
}

Subgroup subgroup_generated(const FiniteGroup& g, std::span<const Element> generators) {
  for (Element x : generators)
    if (x >= g.order()) throw ArgumentError("generator index out of range");
  std::vector<bool> in(g.order(), false);
  in[g.identity()] = true;
  std::deque<Element> frontier = {g.identity()};
  while (!frontier.empty()) {
    const Element x = frontier.front();
    frontier.pop_front();
    for (Element s : generators) {
      const Element y = g.mul(x, s);
      if (!in[y]) {
        in[y] = true;
        frontier.push_back(y);
      }
    }
  }
  Subgroup out;
  for (Element x = 0; x < g.order(); ++x)
    if (in[x]) out.push_back(x);
  return out;
}

Subgroup subgroup_generated(const FiniteGroup& g, std::span<const Subgroup> subsets) {
  std::vector<Element> all;
  for (const auto& s : subsets) all.insert(all.end(), s.begin(), s.end());
  return subgroup_generated(g, std::span<const Element>(all));
}

Subgroup normal_closure(const FiniteGroup& g, std::span<const Element> generators) {
  std::set<Element> conj;
  for (Element s : generators)
    for (Element x = 0; x < g.order(); ++x) conj.insert(g.mul(g.mul(x, s), g.inverse(x)));
  const std::vector<Element> v(conj.begin(), conj.end());
  return subgroup_generated(g, std::span<const Element>(v));
}

Subgroup intersect_subgroups(const Subgroup& a, const Subgroup& b) {
  Subgroup out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<Subgroup> normal_subgroups(const FiniteGroup& g, std::size_t bound) {
  if (g.order() > bound)
    throw BoundError("group order " + std::to_string(g.order()) + " exceeds bound " + std::to_string(bound));
  std::set<Subgroup> found;
  found.insert(Subgroup{g.identity()});
  for (Element x = 0; x < g.order(); ++x) {
    const Element gen[] = {x};
    found.insert(normal_closure(g, gen));
  }
  // Every normal subgroup is a join of normal closures of single elements.
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<Subgroup> cur(found.begin(), found.end());
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (std::size_t j = i + 1; j < cur.size(); ++j) {
        const Subgroup pair[] = {cur[i], cur[j]};
        if (found.insert(subgroup_generated(g, std::span<const Subgroup>(pair))).second) grew = true;
      }
  }
  std::vector<Subgroup> out(found.begin(), found.end());
  std::stable_sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) { return a.size() < b.size(); });
  return out;
}

Quotient quotient(const FiniteGroup& g, const Subgroup& s) {
  if (!is_normal(g, s)) throw PreconditionError("quotient requires a normal subgroup");
  const std::size_t n = g.order();
  std::vector<Element> coset(n, static_cast<Element>(n));
  std::vector<Element> reps;
  for (Element x = 0; x < n; ++x) {
    if (coset[x] != n) continue;
    const auto c = static_cast<Element>(reps.size());
    reps.push_back(x);
    for (Element h : s) coset[g.mul(x, h)] = c;
  }
  const std::size_t m = reps.size();
  std::vector<std::vector<Element>> t(m, std::vector<Element>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) t[a][b] = coset[g.mul(reps[a], reps[b])];
  return {FiniteGroup(std::move(t)), std::move(coset)};
}

Embedded subgroup_as_group(const FiniteGroup& g, const Subgroup& s) {
  if (!is_subgroup(g, s)) throw PreconditionError("not a subgroup");
  std::vector<Element> pos(g.order(), 0);
  for (std::size_t i = 0; i < s.size(); ++i) pos[s[i]] = static_cast<Element>(i);
  std::vector<std::vector<Element>> t(s.size(), std::vector<Element>(s.size()));
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = 0; b < s.size(); ++b) t[a][b] = pos[g.mul(s[a], s[b])];
  FiniteGroup h(std::move(t));
  if (g.permutations()) {
    std::vector<Permutation> ps;
    for (Element x : s) ps.push_back((*g.permutations())[x]);
    // s is sorted and the ambient list is sorted, so indices line up.
    h = FiniteGroup::from_permutations(std::move(ps));
  }
  return {std::move(h), s};
}

namespace {

std::vector<std::size_t> order_profile(const FiniteGroup& g) {
  std::vector<std::size_t> p;
  for (Element x = 0; x < g.order(); ++x) p.push_back(g.element_order(x));
  std::sort(p.begin(), p.end());
  return p;
}

// Small generating set, preferring elements of large order.
std::vector<Element> generating_set(const FiniteGroup& g) {
  std::vector<Element> cand(g.order());
  std::iota(cand.begin(), cand.end(), Element{0});
  std::stable_sort(cand.begin(), cand.end(),
                   [&](Element a, Element b) { return g.element_order(a) > g.element_order(b); });
  std::vector<Element> gens;
  Subgroup cur = {g.identity()};
  for (Element x : cand) {
    if (cur.size() == g.order()) break;
    if (std::binary_search(cur.begin(), cur.end(), x)) continue;
    gens.push_back(x);
    cur = subgroup_generated(g, std::span<const Element>(gens));
  }
  return gens;
}

// Extends gens -> images to a map on all of a; returns false if not a
// well-defined bijective homomorphism.
bool extends_to_isomorphism(const FiniteGroup& a, const FiniteGroup& b, const std::vector<Element>& gens,
                            const std::vector<Element>& images) {
  const std::size_t n = a.order();
  const auto none = static_cast<Element>(n);
  std::vector<Element> phi(n, none);
  phi[a.identity()] = b.identity();
  std::deque<Element> frontier = {a.identity()};
  while (!frontier.empty()) {
    const Element x = frontier.front();
    frontier.pop_front();
    for (std::size_t k = 0; k < gens.size(); ++k) {
      const Element y = a.mul(x, gens[k]);
      const Element py = b.mul(phi[x], images[k]);
      if (phi[y] == none) {
        phi[y] = py;
        frontier.push_back(y);
      } else if (phi[y] != py) {
        return false;
      }
    }
  }
  std::vector<bool> hit(n, false);
  for (Element y : phi) {
    if (y == none || hit[y]) return false;
    hit[y] = true;
  }
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      if (phi[a.mul(x, y)] != b.mul(phi[x], phi[y])) return false;
  return true;
}

bool search(const FiniteGroup& a, const FiniteGroup& b, const std::vector<Element>& gens, std::vector<Element>& images) {
  if (images.size() == gens.size()) return extends_to_isomorphism(a, b, gens, images);
  const std::size_t want = a.element_order(gens[images.size()]);
  for (Element y = 0; y < b.order(); ++y) {
    if (b.element_order(y) != want) continue;
    images.push_back(y);
    if (search(a, b, gens, images)) return true;
    images.pop_back();
  }
  return false;
}

}  // namespace

bool is_isomorphic(const FiniteGroup& a, const FiniteGroup& b, std::size_t bound) {
  if (a.order() > bound || b.order() > bound)
    throw BoundError("isomorphism test limited to order " + std::to_string(bound));
  if (a.order() != b.order()) return false;
  if (order_profile(a) != order_profile(b)) return false;
  if (a.is_abelian() != b.is_abelian()) return false;
  const std::vector<Element> gens = generating_set(a);
  std::vector<Element> images;
  return search(a, b, gens, images);
}

}  // namespace qsym::grouporacle
