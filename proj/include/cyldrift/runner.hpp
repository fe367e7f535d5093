#pragma once

#include <string>
#include <vector>

namespace cyldrift {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kSchema = 2,
  kSolverFailure = 3,
  kIncompatibleData = 4,
  kNotConverged = 5,
};

/// Dispatch a CLI invocation (argv without the program name).
int run_command(const std::vector<std::string>& args);

} // namespace cyldrift
