#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gencoupon {

inline constexpr const char* kToolVersion = "1.0.0";

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,
  kExitUsage = 2,
  kExitNumeric = 3,
};

/// Entry point of the `gencoupon` tool; args excludes the program name.
/// Reports go to `out` (or the --out file), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gencoupon
