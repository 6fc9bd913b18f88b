#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qsym/hopfimage.hpp"
#include "qsym/io.hpp"
#include "qsym/qinc.hpp"

namespace qsym::cli {

using std::filesystem::path;

enum class Output { text, json };

struct RunConfig {
  cnum::Tolerance tol{};
  std::size_t max_iter = 10000;
  hopfimage::Method method = hopfimage::Method::both;
  Output output = Output::text;
  std::uint64_t seed = 1;

  io::json to_json() const;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 2;
inline constexpr int kExitInput = 3;
inline constexpr int kExitConsistency = 4;

int exit_code_for(const std::exception& e);

// Parses a QSYM_TOL value; throws ArgumentError unless it is a positive number.
double parse_tolerance(const std::string& s);

io::Report cmd_verify_family(const path& family, const RunConfig& cfg);
io::Report cmd_hopf_image(const path& fqg, const path& hom, const RunConfig& cfg);
io::Report cmd_gen_subgroup(const path& fqg, const std::vector<path>& homs, const RunConfig& cfg);
io::Report cmd_inner_faithful(const path& fqg, const path& hom, const path& state, const RunConfig& cfg);

struct QincArgs {
  std::string sub;  // enumerate | complete | s4check | freepair | growth
  std::size_t k = 2;
  std::size_t n = 4;
  std::vector<std::size_t> seq;
  std::optional<path> file;
  std::optional<double> t;
  std::size_t samples = 0;
  std::size_t levels = 3;
  bool drop_identity = false;
  qinc::GrowthOptions growth{};
};
io::Report cmd_qinc(const QincArgs& args, const RunConfig& cfg);

// Runs a command; exceptions become a failed report with the mapped exit code
// and the message under results.error.
io::Report run_guarded(const std::string& command, const RunConfig& cfg, const std::function<io::Report()>& f);

std::string render_text(const io::Report& r);

}  // namespace qsym::cli
