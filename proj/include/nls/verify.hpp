#pragma once

#include <string>
#include <vector>

namespace nls {

struct CriterionResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Names of the acceptance criteria, in report order.
const std::vector<std::string>& acceptance_criteria();

// Runs the acceptance checks whose name contains `filter` (all when empty)
// and returns one result per criterion.  Criteria never throw; failures are
// reported in the result.
std::vector<CriterionResult> run_acceptance(const std::string& filter = "");

}  // namespace nls
