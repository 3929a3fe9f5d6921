#pragma once

// The `rigidkit` command line. Exit codes: 0 ok, 1 violation, 2 usage,
// parse or input error.

#include <ostream>
#include <string>
#include <vector>

namespace rigidkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitError = 2;

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rigidkit::cli
