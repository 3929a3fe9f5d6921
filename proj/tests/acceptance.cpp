// Acceptance run: one line per criterion, exit status 1 if any fails.

#include <cstdio>
#include <string>

#include "rigidkit/suites.hpp"

int main() {
  int failures = 0;
  int n = 0;
  for (const auto& name : rigidkit::suite_names()) {
    ++n;
    rigidkit::SuiteResult r;
    try {
      r = rigidkit::run_suite(name, 1, 1);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("error: ") + e.what();
    }
    failures += !r.pass;
    std::printf("criterion %d [%s] %s: %s (%.2f s of %.0f s)\n", n, r.pass ? "PASS" : "FAIL", name.c_str(),
                r.detail.c_str(), r.seconds, r.budget);
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", n - failures, n);
  return failures == 0 ? 0 : 1;
}
