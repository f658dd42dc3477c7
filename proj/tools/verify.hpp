#pragma once

#include <string>

namespace limitlab::cli {

// Runs the exhaustive-oracle property suites at pinned sizes, printing one
// [ok]/[FAIL] line per check. Suites: identities, moments, stein, metrics,
// all. Returns the number of failed checks.
int run_verify_suite(const std::string& suite);

}  // namespace limitlab::cli
