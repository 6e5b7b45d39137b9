#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gl2kit::cli {

/// Exit codes of the command line tool.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kPrecondition = 2,
  kViolation = 3,
};

/// Runs one command. `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gl2kit::cli
