#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qmachine::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 20240601;

enum ExitCode : int {
  kOk = 0,
  kIoFailure = 1,
  kUsage = 2,
  kDomain = 3,
  kNumeric = 4,
};

/// Runs the command line `args` (args[0] is the program name) writing
/// results to `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest decimal that round-trips to `x`; "nan" for NaN.
std::string format_number(double x);

}  // namespace qmachine::cli
