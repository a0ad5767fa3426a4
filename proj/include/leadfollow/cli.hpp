#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace leadfollow {

// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitDiverged = 2,
  kExitCheckFailed = 3,
};

// Dispatches `simulate`, `certify`, `gains`, `bound` and `paper`.
// args excludes the program name. Reports go to out, diagnostics to err.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace leadfollow
