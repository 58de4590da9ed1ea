#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace schedsim::cli {

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kConfigError = 2, kInfeasible = 3 };

/// Runs the command line `args` (without the program name). Primary output
/// goes to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace schedsim::cli
