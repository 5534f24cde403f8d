#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace uls::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kRuntime = 3,
  kInsufficientData = 4,
};

// Entry point behind the `uls` executable. `args` excludes the program
// name. Never throws; failures map onto ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace uls::cli
