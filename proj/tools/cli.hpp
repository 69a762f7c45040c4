#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace detuf::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kIo = 2,
  kVerification = 3,
};

/// Runs the `detuf` command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace detuf::cli
