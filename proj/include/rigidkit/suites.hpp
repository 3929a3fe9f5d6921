#pragma once

// Named verification suites. Each one is a complete acceptance check with its
// own runtime budget; the CLI's `verify` subcommand and the acceptance binary
// both run them through run_suite.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rigidkit/documents.hpp"

namespace rigidkit {

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;          // one line, human readable
  Json facts = Json::object();  // counts and measured values
  double seconds = 0;
  double budget = 0;  // runtime limit in seconds
};

/// ring-cpn, quadric, complex-product, index, toric, qstate.
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown name. The verdict includes
/// the runtime budget.
SuiteResult run_suite(std::string_view name, std::uint64_t seed = 1, int jobs = 1);

}  // namespace rigidkit
