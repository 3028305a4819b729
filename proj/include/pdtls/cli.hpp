#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdtls::cli {

/// Stable exit-code contract of the command-line tool.
enum ExitCode : int {
  kSuccess = 0,
  kInternalError = 1,
  kNoSolution = 2,
  kInvalidInput = 3,
};

/// Runs `pdtls <subcommand> [flags]`. args excludes the program name.
/// Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pdtls::cli
