#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cbpd {

enum ExitCode : int { kOk = 0, kViolation = 1, kUsage = 2, kResource = 3 };

// Runs the command line `args` (without the program name), writing results to
// `out` and diagnostics to `err`; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cbpd
