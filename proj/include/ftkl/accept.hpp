// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ftkl::accept {

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail; // measured numbers and tolerances, or the error
  double seconds = 0.0;
};

struct SuiteResult {
  std::vector<CriterionResult> criteria;
  // name -> CSV bytes, in generation order; callers persist these.
  std::vector<std::pair<std::string, std::string>> artifacts;

  bool all_pass() const;
};

// Runs every release criterion.  A criterion that throws is recorded as a
// failure with the error text; the suite itself always returns.
SuiteResult run_all();

} // namespace ftkl::accept
