#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hessiana/classifier.hpp"

namespace hessiana {

struct CliConfig {
  std::string command;  // generate | analyze | section | prolong | profile
  std::string input;    // registry name or path to a cubic file
  std::string field = "rational";  // generate only
  std::uint64_t prime = kDefaultPrime;
  std::size_t prime_count = 2;
  std::uint64_t seed = kDefaultSeed;
  bool random_seed = false;
  std::size_t samples = 3;
  std::size_t witnesses = 20;
  std::size_t secant_trials = 200;
  std::string output;  // empty: stdout
  std::string orbit;   // section --orbit O1|O2|O3
  bool random_section = false;
  std::string covector;  // section --covector "l0,l1,..."
  bool dim_only = false;
  bool basis = false;
  bool rational = false;  // prolong --basis over Q
  bool timestamp = true;
  int verbosity = 0;
  std::string invocation;
};

enum ExitCode { kExitOk = 0, kExitError = 1, kExitInconclusive = 2 };

/// Parses argv into cfg. Returns an exit code when the process should stop
/// (help, or a usage error), otherwise nullopt.
std::optional<int> parse_cli(int argc, const char* const* argv, CliConfig& cfg, std::ostream& out, std::ostream& err);

int run_command(const CliConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_cli followed by run_command.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Registry name or cubic file.
NamedForm resolve_input(const std::string& input);

}  // namespace hessiana
