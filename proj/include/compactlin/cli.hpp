#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace compactlin {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitWitness = 2,
  kExitBudget = 3,
  kExitIo = 4,
};

struct CliConfig {
  enum class Command { kLinearize, kMinimize, kVerify, kCompare, kEmit };
  Command command = Command::kLinearize;
  std::string input;
  std::string output;  // empty: stdout only
  std::string plan;    // verify/emit: plan file instead of computing one
  double w_eqn = 1.0;
  double w_var = 1.0;
  bool simplify_trivial = false;
  bool unsafe_emit = false;
  bool liberti_mode = false;
  bool standard = false;  // emit: standard linearization instead of compact
  bool json = false;
  std::uint64_t seed = 0;
  std::int64_t cap_x = 4096;
  std::int64_t cap_y = std::int64_t{1} << 20;
  std::int64_t budget = 2'000'000;
};

int run(const CliConfig& config, std::ostream& out, std::ostream& err);

// Parses `args` (without the program name) and runs the command.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace compactlin
