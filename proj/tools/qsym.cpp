#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "qsym/errors.hpp"

using namespace qsym::cli;

int main(int argc, char** argv) {
  CLI::App app{"Finite quantum symmetry toolkit"};
  app.fallthrough();
  app.require_subcommand(1);

  RunConfig cfg;
  std::optional<double> tol, rank_tol;
  std::string method = "both", output = "text";
  app.add_option("--tol", tol, "entrywise equality tolerance (default 1e-9, or QSYM_TOL)")->check(CLI::PositiveNumber);
  app.add_option("--rank-tol", rank_tol, "relative rank threshold (default 1e-8)")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", cfg.max_iter, "iteration budget")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--method", method, "Hopf image algorithm")
      ->check(CLI::IsMember({"kernel", "coideal", "both"}))
      ->capture_default_str();
  app.add_option("--output", output, "report format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for randomized suites")->capture_default_str();

  std::string family;
  auto* verify = app.add_subcommand("verify-family", "check the Wang relations and the Podles condition of a family");
  verify->add_option("family", family, "family JSON")->required();

  std::string fqg, hom, state;
  auto* hopf = app.add_subcommand("hopf-image", "Hopf image of a homomorphism out of a finite quantum group");
  hopf->add_option("fqg", fqg, "quantum group JSON")->required();
  hopf->add_option("hom", hom, "homomorphism JSON")->required();

  std::vector<std::string> homs;
  auto* gen = app.add_subcommand("gen-subgroup", "quantum subgroup generated by a list of subgroups");
  gen->add_option("fqg", fqg, "quantum group JSON")->required();
  gen->add_option("subgroups", homs, "subgroup JSON files")->required();

  auto* inner = app.add_subcommand("inner-faithful", "Cesaro test for inner faithfulness");
  inner->add_option("fqg", fqg, "quantum group JSON")->required();
  inner->add_option("hom", hom, "homomorphism JSON")->required();
  inner->add_option("state", state, "faithful state on the target, JSON")->required();

  QincArgs qa;
  std::string rep_file;
  auto* qinc = app.add_subcommand("qinc", "quantum increasing sequences");
  qinc->require_subcommand(1);
  auto* q_enum = qinc->add_subcommand("enumerate", "classical sequences of length k in 1..n and their completions");
  q_enum->add_option("k", qa.k)->required();
  q_enum->add_option("n", qa.n)->required();
  auto* q_complete = qinc->add_subcommand("complete", "complete a rep to a magic unitary");
  auto* q_s4 = qinc->add_subcommand("s4check", "closure of the six completed permutations for k=2, n=4");
  q_s4->add_flag("--drop-identity", qa.drop_identity);
  auto* q_free = qinc->add_subcommand("freepair", "free-pair reps of the (2,4) sequence algebra");
  q_free->add_option("--samples", qa.samples, "number of seeded random reps");
  auto* q_growth = qinc->add_subcommand("growth", "dimensions of the algebras generated by composed coefficients");
  q_growth->add_option("--levels", qa.levels, "number of composition levels")->check(CLI::PositiveNumber);
  q_growth->add_option("--degree-cap", qa.growth.degree_cap)->check(CLI::PositiveNumber);
  q_growth->add_option("--dim-cap", qa.growth.dim_cap)->check(CLI::PositiveNumber);
  std::optional<double> t;
  for (auto* sub : {q_complete, q_free, q_growth}) sub->add_option("--t", t, "tilt of the standard free pair");
  for (auto* sub : {q_complete, q_growth}) {
    sub->add_option("rep", rep_file, "rep JSON");
    sub->add_option("--seq", qa.seq, "1-based increasing sequence")->delimiter(',');
    sub->add_option("--n", qa.n, "number of points for --seq");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (const char* env = std::getenv("QSYM_TOL"); env && *env) cfg.tol.eps_eq = parse_tolerance(env);
    if (tol) cfg.tol.eps_eq = *tol;
    if (rank_tol) cfg.tol.eps_rank = *rank_tol;
    cfg.tol.validate();
    cfg.method = qsym::hopfimage::method_from_string(method);
    cfg.output = output == "json" ? Output::json : Output::text;
  } catch (const std::exception& e) {
    std::cerr << "qsym: " << e.what() << "\n";
    return kExitInput;
  }
  qa.t = t;
  if (!rep_file.empty()) qa.file = rep_file;

  qsym::io::Report report;
  if (*verify) {
    report = run_guarded("verify-family", cfg, [&] { return cmd_verify_family(family, cfg); });
  } else if (*hopf) {
    report = run_guarded("hopf-image", cfg, [&] { return cmd_hopf_image(fqg, hom, cfg); });
  } else if (*gen) {
    std::vector<path> files(homs.begin(), homs.end());
    report = run_guarded("gen-subgroup", cfg, [&] { return cmd_gen_subgroup(fqg, files, cfg); });
  } else if (*inner) {
    report = run_guarded("inner-faithful", cfg, [&] { return cmd_inner_faithful(fqg, hom, state, cfg); });
  } else {
    for (auto* sub : qinc->get_subcommands()) qa.sub = sub->get_name();
    report = run_guarded("qinc " + qa.sub, cfg, [&] { return cmd_qinc(qa, cfg); });
  }

  if (cfg.output == Output::json) {
    std::cout << qsym::io::to_json(report).dump(2) << "\n";
  } else {
    std::cout << render_text(report);
  }
  if (report.results.contains("error")) std::cerr << "qsym: " << report.results["error"].get<std::string>() << "\n";
  return report.exit_code;
}
