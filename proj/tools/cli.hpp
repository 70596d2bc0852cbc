#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace safari::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParseError = 2,
  kObservationInconsistent = 3,
  kLimitExceeded = 4,
};

/// Runs the command line `args` (without the program name), writing results
/// to `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace safari::cli
