#pragma once

#include <string>

namespace ansep {

// One end-to-end check of the artifact, runnable standalone. Tolerances and
// budgets are pinned inside the implementation, not configurable.
struct CriterionOutcome {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // key measured numbers, one line
  double seconds = 0.0;
};

int criterion_count();
const std::string& criterion_name(int index);  // 1-based

CriterionOutcome run_criterion(int index);

// "[PASS] 3 name: detail [1.2s]" line for one outcome.
std::string format_outcome(const CriterionOutcome& o);

}  // namespace ansep
