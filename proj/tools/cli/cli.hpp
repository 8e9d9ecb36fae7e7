#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polyinv::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kSolverFailure = 2,
  kNoWell = 3,
};

/// Runs the command line `args` (without the program name). Tables go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace polyinv::cli
