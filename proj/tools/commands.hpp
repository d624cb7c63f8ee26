#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "bonusruin/errors.hpp"
#include "config.hpp"
#include "output.hpp"

namespace bonusruin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRegime = 3;
inline constexpr int kExitNumerical = 4;

int exit_code_for(ErrorKind kind) noexcept;

struct RunOptions {
  unsigned threads = 0;  ///< 0: BONUSRUIN_THREADS or 1
  bool paper_variant = false;
};

struct CommandOutput {
  Json metadata;
  Table table;
  std::string report;  ///< human-readable summary (check, kappa)
};

std::vector<std::string> command_names();

/// Validates the config for `name`, runs it and returns the rows. Throws
/// ConfigError or bonusruin::Error.
CommandOutput run_command(const std::string& name, RunConfig config, const RunOptions& options);

/// Full command line (args[0] is the program name). Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bonusruin::cli
