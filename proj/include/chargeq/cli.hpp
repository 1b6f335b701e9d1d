#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chargeq {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitDomainError = 1, kExitUsage = 2 };

/// Runs the CLI on `args` (args[0] is the program name). Normal output goes
/// to `out`, diagnostics to `err`. Subcommands: concurrence, density,
/// sweep, figures, verify.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chargeq
