#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

#include "qsym/errors.hpp"
#include "qsym/fqg.hpp"
#include "qsym/qfam.hpp"

namespace qsym::cli {

namespace {

using io::json;
using io::Report;
using cnum::CMatrix;
using grouporacle::Element;
using grouporacle::FiniteGroup;

struct Inputs {
  std::uint64_t hash = 0xcbf29ce484222325ULL;

  json load(const path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    if (in) ss << in.rdbuf();
    hash = io::fnv1a(ss.str(), hash);
    return io::read_json_file(p);
  }
  void add(std::string_view s) { hash = io::fnv1a(s, hash); }
  std::string digest() const { return "fnv1a64:" + io::hex_digest(hash); }
};

double soundness_bound(const RunConfig& cfg) { return std::max(cfg.tol.eps_eq, cfg.tol.eps_rank); }

void finish(Report& r, bool ok, int fail_code = kExitCheckFailed) {
  r.passed = ok;
  r.exit_code = ok ? kExitPass : fail_code;
}

json witness_json(const std::array<std::size_t, 3>& w) { return json::array({w[0] + 1, w[1] + 1, w[2] + 1}); }

json oracle_json(std::optional<std::size_t> expected, std::size_t got) {
  if (!expected) return json{{"available", false}};
  return json{{"available", true}, {"expected_dim", *expected}, {"match", *expected == got}};
}

hopfimage::HopfImageOptions hopf_options(const RunConfig& cfg) {
  hopfimage::HopfImageOptions opt;
  opt.method = cfg.method;
  opt.tol = cfg.tol;
  opt.max_depth = std::min<std::size_t>(cfg.max_iter, opt.max_depth);
  return opt;
}

std::size_t cesaro_budget(const RunConfig& cfg) { return std::min<std::size_t>(cfg.max_iter, 60); }

json family_results(const qfam::FamilyCheckReport& c) {
  return json{{"wang2_witness", witness_json(c.wang2_witness)},
              {"podles_rank", c.podles_rank},
              {"podles_full", c.podles_full},
              {"state_preserved", c.state_preserved},
              {"is_star_hom", c.is_star_hom()},
              {"tolerance_used", c.tolerance_used},
              {"all_pass", c.all_pass()}};
}

json family_residuals(const qfam::FamilyCheckReport& c) {
  return json{{"wang1", c.wang1}, {"wang2", c.wang2}, {"wang3", c.wang3}, {"wang4", c.wang4}, {"unitary", c.unitary}};
}

// The completion written out in terms of the four generators.
std::vector<CMatrix> displayed_completion(const qinc::FreePair& f) {
  const CMatrix one = CMatrix::identity(f.p1.rows()), z(f.p1.rows(), f.p1.rows());
  const CMatrix &p1 = f.p1, &p2 = f.p2, &q1 = f.q1, &q2 = f.q2;
  return {one - p1 - p2, z,       p1 + p2, z,
          p1,            q1,      one - p1 - p2 - q1, p2,
          p2,            q2,      q1,      one - p2 - q1 - q2,
          z,             one - q1 - q2, z, q1 + q2};
}

double commutator_defect(const qinc::FreePair& f) {
  double worst = 0;
  for (const CMatrix* c : {&f.q1, &f.p2})
    for (const CMatrix* x : {&f.p1, &f.p2, &f.q1, &f.q2})
      worst = std::max(worst, cnum::max_abs_diff(cnum::matmul(*c, *x), cnum::matmul(*x, *c)));
  return worst;
}

struct FreePairCheck {
  double validate = 0;
  double magic = 0;
  double displayed = 0;
  double central = 0;
  bool family_ok = false;
  qinc::MagicUnitaryRep completed;
};

FreePairCheck check_free_pair(const qinc::FreePair& f, const cnum::Tolerance& tol) {
  FreePairCheck c;
  c.validate = qinc::validate(f.rep).worst();
  c.completed = qinc::complete(f.rep, tol);
  c.magic = qinc::magic_residual(c.completed);
  const auto shown = displayed_completion(f);
  for (std::size_t i = 0; i < shown.size(); ++i)
    c.displayed = std::max(c.displayed, cnum::max_abs_diff(c.completed.p[i], shown[i]));
  c.central = commutator_defect(f);
  c.family_ok = qfam::check_family(qinc::completion_family(f.rep, tol), tol).all_pass();
  return c;
}

qinc::IncreasingSequenceRep rep_for(const QincArgs& a, Inputs& in, json& results) {
  if (a.file) return io::rep_from_json(in.load(*a.file));
  if (a.t) {
    in.add("t=" + std::to_string(*a.t));
    results["t"] = *a.t;
    return qinc::tilted_free_pair(*a.t).rep;
  }
  if (!a.seq.empty()) {
    std::string s = "seq";
    for (auto x : a.seq) s += " " + std::to_string(x);
    in.add(s + " n=" + std::to_string(a.n));
    results["sequence"] = a.seq;
    return qinc::classical_rep(a.seq, a.n);
  }
  throw ArgumentError("give a rep file, --t, or --seq with --n");
}

Report qinc_enumerate(const QincArgs& a, const RunConfig& cfg, Inputs& in) {
  in.add("enumerate " + std::to_string(a.k) + " " + std::to_string(a.n));
  if (a.k == 0 || a.k > a.n) throw ArgumentError("need 1 <= k <= n");
  Report r;
  json seqs = json::array(), perms = json::array();
  bool ok = true;
  double worst = 0;
  for (const auto& s : qinc::increasing_sequences(a.k, a.n)) {
    const auto rep = qinc::classical_rep(s, a.n);
    ok = ok && qinc::validate(rep).ok(cfg.tol);
    const auto m = qinc::complete(rep, cfg.tol);
    worst = std::max(worst, qinc::magic_residual(m));
    const auto p = qinc::as_permutation(m, cfg.tol);
    seqs.push_back(s);
    perms.push_back(p ? json(p->to_cycles()) : json(nullptr));
    ok = ok && p.has_value();
  }
  r.results = {{"k", a.k}, {"n", a.n}, {"count", seqs.size()}, {"sequences", seqs}, {"completions", perms}};
  r.residuals = {{"magic", worst}};
  finish(r, ok && worst <= 10 * cfg.tol.eps_eq);
  return r;
}

Report qinc_complete(const QincArgs& a, const RunConfig& cfg, Inputs& in) {
  Report r;
  const auto rep = rep_for(a, in, r.results);
  const auto m = qinc::complete(rep, cfg.tol);
  const double magic = qinc::magic_residual(m);
  r.results["completion"] = io::to_json(m);
  if (const auto p = qinc::as_permutation(m, cfg.tol)) r.results["permutation"] = p->to_cycles();
  r.residuals = {{"validate", qinc::validate(rep).worst()}, {"magic", magic}};
  finish(r, magic <= 10 * cfg.tol.eps_eq);
  return r;
}

Report qinc_s4check(const QincArgs& a, const RunConfig&, Inputs& in) {
  in.add(a.drop_identity ? "s4check drop" : "s4check");
  Report r;
  const qinc::S4Check c = qinc::s4_generation_check(a.drop_identity);
  json perms = json::array();
  for (const auto& p : c.completed) perms.push_back(p.to_cycles());
  std::vector<grouporacle::Permutation> sorted = c.completed;
  std::sort(sorted.begin(), sorted.end());
  const bool distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  r.results = {{"completions", perms}, {"distinct", distinct}, {"order", c.order}, {"is_S4", c.is_S4},
               {"drop_identity", a.drop_identity}};
  finish(r, c.is_S4 && distinct);
  return r;
}

Report qinc_freepair(const QincArgs& a, const RunConfig& cfg, Inputs& in) {
  Report r;
  const double magic_bound = 10 * cfg.tol.eps_eq;
  if (a.samples > 0) {
    in.add("freepair samples=" + std::to_string(a.samples) + " seed=" + std::to_string(cfg.seed));
    std::mt19937_64 rng(cfg.seed);
    std::vector<qinc::FreePair> pairs;
    for (std::size_t s = 0; s < a.samples; ++s) pairs.push_back(qinc::random_free_pair(rng));
    std::vector<std::future<FreePairCheck>> jobs;
    for (const auto& f : pairs)
      jobs.push_back(std::async(std::launch::async, [&f, &cfg] { return check_free_pair(f, cfg.tol); }));
    FreePairCheck worst;
    worst.family_ok = true;
    json ts = json::array();
    for (std::size_t s = 0; s < jobs.size(); ++s) {
      const FreePairCheck c = jobs[s].get();
      ts.push_back(pairs[s].t);
      worst.validate = std::max(worst.validate, c.validate);
      worst.magic = std::max(worst.magic, c.magic);
      worst.displayed = std::max(worst.displayed, c.displayed);
      worst.central = std::max(worst.central, c.central);
      worst.family_ok = worst.family_ok && c.family_ok;
    }
    r.results = {{"samples", a.samples}, {"seed", cfg.seed}, {"t", ts}, {"families_pass", worst.family_ok}};
    r.residuals = {{"validate", worst.validate},
                   {"magic", worst.magic},
                   {"displayed_matrix", worst.displayed},
                   {"central", worst.central}};
    finish(r, worst.family_ok && worst.magic <= magic_bound && worst.displayed <= magic_bound &&
                  worst.central <= cfg.tol.eps_eq && worst.validate <= cfg.tol.eps_eq);
    return r;
  }
  const double t = a.t.value_or(0.5);
  in.add("freepair t=" + std::to_string(t));
  const qinc::FreePair f = qinc::tilted_free_pair(t);
  const FreePairCheck c = check_free_pair(f, cfg.tol);
  r.results = {{"t", t}, {"completion", io::to_json(c.completed)}, {"family_pass", c.family_ok}};
  r.residuals = {
      {"validate", c.validate}, {"magic", c.magic}, {"displayed_matrix", c.displayed}, {"central", c.central}};
  finish(r, c.family_ok && c.magic <= magic_bound && c.displayed <= magic_bound && c.validate <= cfg.tol.eps_eq);
  return r;
}

Report qinc_growth(const QincArgs& a, const RunConfig& cfg, Inputs& in) {
  Report r;
  const auto rep = rep_for(a, in, r.results);
  in.add("levels=" + std::to_string(a.levels));
  const qinc::GrowthResult g = qinc::coefficient_growth(rep, a.levels, a.growth, cfg.tol);
  bool monotone = true;
  for (std::size_t m = 1; m < g.dims.size(); ++m) monotone = monotone && g.dims[m] >= g.dims[m - 1];
  r.results["dims"] = g.dims;
  r.results["truncated"] = g.truncated;
  r.results["degree_cap"] = g.degree_cap;
  r.results["dim_cap"] = g.dim_cap;
  r.results["monotone"] = monotone;
  finish(r, monotone);
  return r;
}

}  // namespace

json RunConfig::to_json() const {
  return json{{"tol", tol.eps_eq},
              {"rank_tol", tol.eps_rank},
              {"max_iter", max_iter},
              {"method", hopfimage::to_string(method)},
              {"output", output == Output::json ? "json" : "text"},
              {"seed", seed}};
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConsistencyError*>(&e)) return kExitConsistency;
  if (dynamic_cast<const ConvergenceError*>(&e)) return kExitCheckFailed;
  if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const BoundError*>(&e) ||
      dynamic_cast<const nlohmann::json::exception*>(&e))
    return kExitInput;
  return kExitConsistency;
}

double parse_tolerance(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ArgumentError("QSYM_TOL is not a number: " + s);
  }
  if (used != s.size() || !(v > 0) || !std::isfinite(v)) throw ArgumentError("QSYM_TOL must be a positive number");
  return v;
}

Report cmd_verify_family(const path& family, const RunConfig& cfg) {
  Inputs in;
  const qfam::QuantumFamily f = io::family_from_json(in.load(family), cfg.tol);
  const qfam::FamilyCheckReport c = qfam::check_family(f, cfg.tol);
  Report r;
  r.inputs_digest = in.digest();
  r.results = family_results(c);
  r.results["n"] = f.n();
  r.results["index_dim"] = f.index().dim();
  r.residuals = family_residuals(c);
  finish(r, c.all_pass());
  return r;
}

Report cmd_hopf_image(const path& fqg_file, const path& hom_file, const RunConfig& cfg) {
  Inputs in;
  const io::LoadedFqg q = io::fqg_from_json(in.load(fqg_file), cfg.tol);
  const io::LoadedHom h = io::hom_from_json(in.load(hom_file), q, cfg.tol);
  const hopfimage::HopfImageResult res = hopfimage::hopf_image(q.q, h.hom, hopf_options(cfg));
  Report r;
  r.inputs_digest = in.digest();
  r.results = {{"dim_A", q.q.dim()},
               {"dim_S", res.dim()},
               {"dim_J", res.J.dim()},
               {"method", hopfimage::to_string(res.method)},
               {"n_stabilized", res.n_stabilized},
               {"inner_faithful", res.dim() == q.q.dim()},
               {"commutative", res.quotient.alg().is_commutative(cfg.tol)},
               {"hom", h.kind},
               {"oracle", oracle_json(h.oracle_dim, res.dim())},
               {"quotient", io::to_json(res.quotient)}};
  if (res.kernel_dim) r.results["dim_S_kernel"] = *res.kernel_dim;
  if (res.coideal_dim) r.results["dim_S_coideal"] = *res.coideal_dim;
  r.residuals = {{"ideal", res.residuals.ideal},
                 {"coideal", res.residuals.coideal},
                 {"counit", res.residuals.counit},
                 {"factorization", res.residuals.factorization},
                 {"quotient", res.residuals.quotient}};
  if (h.oracle_dim && *h.oracle_dim != res.dim()) {
    finish(r, false, kExitConsistency);
    return r;
  }
  finish(r, res.residuals.worst() <= soundness_bound(cfg));
  return r;
}

Report cmd_gen_subgroup(const path& fqg_file, const std::vector<path>& homs, const RunConfig& cfg) {
  if (homs.empty()) throw ArgumentError("need at least one subgroup file");
  Inputs in;
  const io::LoadedFqg q = io::fqg_from_json(in.load(fqg_file), cfg.tol);
  std::vector<io::LoadedHom> loaded;
  std::vector<hopfimage::QuantumSubgroup> subs;
  for (const auto& p : homs) {
    loaded.push_back(io::hom_from_json(in.load(p), q, cfg.tol));
    if (!loaded.back().subgroup) throw ArgumentError(p.string() + " does not describe a quantum subgroup");
    subs.push_back(*loaded.back().subgroup);
  }
  auto dual_job = std::async(std::launch::async, [&] { return hopfimage::dual_generated_dim(q.q, subs, cfg.tol); });
  const hopfimage::GeneratedSubgroup g = hopfimage::generated_subgroup(q.q, subs, hopf_options(cfg));
  const std::size_t dual_dim = dual_job.get();

  // Group-theoretic prediction when every input is group-derived.
  std::optional<std::size_t> oracle;
  if (q.group) {
    const FiniteGroup& grp = *q.group;
    grouporacle::Subgroup all(grp.order());
    for (Element x = 0; x < all.size(); ++x) all[x] = x;
    const grouporacle::Subgroup trivial{grp.identity()};
    bool known = true;
    if (q.kind == io::FqgKind::function_algebra) {
      std::vector<grouporacle::Subgroup> parts;
      for (const auto& h : loaded) {
        if (h.kind == "restriction") parts.push_back(h.elements);
        else if (h.kind == "counit") parts.push_back(trivial);
        else if (h.kind == "identity") parts.push_back(all);
        else known = false;
      }
      if (known) oracle = grouporacle::subgroup_generated(grp, parts).size();
    } else if (q.kind == io::FqgKind::group_algebra) {
      grouporacle::Subgroup meet = all;
      for (const auto& h : loaded) {
        grouporacle::Subgroup n;
        if (h.kind == "dual_quotient") {
          n = h.elements;
          std::sort(n.begin(), n.end());
          n.erase(std::unique(n.begin(), n.end()), n.end());
        } else if (h.kind == "identity") {
          n = trivial;
        } else if (h.kind == "counit") {
          n = all;
        } else {
          known = false;
          continue;
        }
        meet = grouporacle::intersect_subgroups(meet, n);
      }
      if (known) oracle = grp.order() / meet.size();
    }
  }

  Report r;
  r.inputs_digest = in.digest();
  double theta_worst = 0;
  bool surjective = true;
  for (double x : g.theta_morphism_residuals) theta_worst = std::max(theta_worst, x);
  for (bool s : g.theta_surjective) surjective = surjective && s;
  r.results = {{"dim_A", q.q.dim()},
               {"dim_S", g.image.dim()},
               {"dual_generated_dim", dual_dim},
               {"method", hopfimage::to_string(g.image.method)},
               {"n_stabilized", g.image.n_stabilized},
               {"subgroups", subs.size()},
               {"theta_surjective", surjective},
               {"inner_faithful", g.image.dim() == q.q.dim()},
               {"oracle", oracle_json(oracle, g.image.dim())},
               {"quotient", io::to_json(g.image.quotient)}};
  r.residuals = {{"ideal", g.image.residuals.ideal},
                 {"coideal", g.image.residuals.coideal},
                 {"counit", g.image.residuals.counit},
                 {"factorization", g.image.residuals.factorization},
                 {"quotient", g.image.residuals.quotient},
                 {"theta_morphism", theta_worst}};
  if (dual_dim != g.image.dim() || (oracle && *oracle != g.image.dim())) {
    finish(r, false, kExitConsistency);
    return r;
  }
  const double bound = soundness_bound(cfg);
  finish(r, surjective && g.image.residuals.worst() <= bound && theta_worst <= bound);
  return r;
}

Report cmd_inner_faithful(const path& fqg_file, const path& hom_file, const path& state_file, const RunConfig& cfg) {
  Inputs in;
  const io::LoadedFqg q = io::fqg_from_json(in.load(fqg_file), cfg.tol);
  const io::LoadedHom h = io::hom_from_json(in.load(hom_file), q, cfg.tol);
  const staralg::StateFunctional phi = io::state_from_json(in.load(state_file), h.hom.target);
  const hopfimage::InnerFaithfulResult res =
      hopfimage::inner_faithful(q.q, h.hom, phi, 1e-10, cesaro_budget(cfg), cfg.tol);
  Report r;
  r.inputs_digest = in.digest();
  r.results = {{"dim_A", q.q.dim()},
               {"inner_faithful", res.inner_faithful},
               {"hopf_image_dim", res.hopf_image_dim},
               {"agrees_with_hopf_image", res.agrees_with_hopf_image},
               {"cesaro_iterations", res.cesaro_iterations},
               {"threshold", hopfimage::kInnerFaithfulThreshold}};
  r.residuals = {{"haar_distance", res.haar_distance}, {"idempotency", res.idempotency}};
  if (!res.agrees_with_hopf_image) {
    finish(r, false, kExitConsistency);
    return r;
  }
  finish(r, res.idempotency <= 10 * cfg.tol.eps_rank);
  return r;
}

Report cmd_qinc(const QincArgs& a, const RunConfig& cfg) {
  Inputs in;
  Report r;
  if (a.sub == "enumerate") r = qinc_enumerate(a, cfg, in);
  else if (a.sub == "complete") r = qinc_complete(a, cfg, in);
  else if (a.sub == "s4check") r = qinc_s4check(a, cfg, in);
  else if (a.sub == "freepair") r = qinc_freepair(a, cfg, in);
  else if (a.sub == "growth") r = qinc_growth(a, cfg, in);
  else throw ArgumentError("unknown qinc subcommand " + a.sub);
  r.inputs_digest = in.digest();
  return r;
}

Report run_guarded(const std::string& command, const RunConfig& cfg, const std::function<Report()>& f) {
  const auto start = std::chrono::steady_clock::now();
  Report r;
  try {
    r = f();
  } catch (const std::exception& e) {
    r = Report{};
    r.results = {{"error", e.what()}};
    finish(r, false, exit_code_for(e));
  }
  r.command = command;
  r.config = cfg.to_json();
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string render_text(const Report& r) {
  std::ostringstream out;
  out << r.command << ": " << (r.passed ? "PASS" : "FAIL") << " (exit " << r.exit_code << ")\n";
  auto scalar_line = [&](const std::string& k, const json& v) {
    if (v.is_object()) {
      if (k == "oracle" && v.value("available", false))
        out << "  oracle: expected " << v["expected_dim"] << ", " << (v["match"].get<bool>() ? "match" : "MISMATCH")
            << "\n";
      return;
    }
    std::string s = v.dump();
    if (s.size() > 160) s = "[" + std::to_string(v.size()) + " items]";
    out << "  " << k << ": " << s << "\n";
  };
  for (const auto& [k, v] : r.results.items()) scalar_line(k, v);
  if (!r.residuals.empty()) {
    out << "  residuals:\n";
    for (const auto& [k, v] : r.residuals.items()) out << "    " << k << ": " << v.dump() << "\n";
  }
  out << "  inputs: " << r.inputs_digest << "\n";
  return out.str();
}

}  // namespace qsym::cli
