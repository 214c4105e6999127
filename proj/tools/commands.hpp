#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace orderdual::cli {

/// Stable exit codes.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::string subcommand;
  std::string model = "voter";  // builtin name or path to a JSON model / diagram
  std::optional<std::size_t> sites;  // builtin default when unset
  double t = 1.0;
  std::optional<std::size_t> n;  // replicas (simulate) or sampled logs (verify)
  std::uint64_t seed = 1;
  double tol = 1e-12;
  std::optional<std::string> variant;
  bool exact = false;
  std::string out;    // main output path; stdout when empty
  std::string trace;  // simulate: trace CSV path
  unsigned jobs = 1;
  bool perturb = false;
  std::optional<std::string> x;  // simulate: initial state label
  std::optional<std::string> y;  // simulate: initial dual state label
};

/// Parses argv-style arguments (without the program name) and runs the
/// subcommand. Messages go to `err`; results go to `out` unless --out is set.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_config(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace orderdual::cli
