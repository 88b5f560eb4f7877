#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace steinerlab {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitValidation = 3,
  kExitNotConverged = 4,
};

/// Runs one command line (without the program name). Errors are reported
/// as a single JSON line on `err`; usage text goes to `out`. The default
/// tolerance profile comes from STEINERLAB_TOL_PROFILE when set.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace steinerlab
