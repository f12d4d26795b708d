#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "ansep/acceptance.hpp"

// Runs the acceptance checklist, one line per criterion. --criterion K runs
// a single entry so failures stay attributable in the test harness.
int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
      if (only < 1 || only > ansep::criterion_count()) {
        std::fprintf(stderr, "criterion index out of range: %s\n", argv[i]);
        return 2;
      }
    } else {
      std::fprintf(stderr, "usage: %s [--criterion K]\n", argv[0]);
      return 2;
    }
  }

  bool all_pass = true;
  for (int k = 1; k <= ansep::criterion_count(); ++k) {
    if (only != 0 && k != only) continue;
    ansep::CriterionOutcome o = ansep::run_criterion(k);
    std::printf("%s\n", ansep::format_outcome(o).c_str());
    std::fflush(stdout);
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
