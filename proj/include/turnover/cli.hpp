#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace turnover {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInvalidInput = 1, kExitNumerical = 2 };

/// Runs one CLI invocation. `args` excludes the program name. The primary
/// artifact goes to `--out FILE` or, without it, to `out`; diagnostics go to
/// `err`. Nothing is written to files unless the whole run succeeds.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace turnover
