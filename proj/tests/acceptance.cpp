// One line per acceptance criterion; exit status 1 if any criterion fails.
#include "gcstar/suite.hpp"

#include <cstdio>

int main() {
  gcstar::SuiteConfig cfg;
  int failed = 0;
  for (const auto& c : gcstar::run_suite(cfg)) {
    std::printf("%s criterion %d (%s): %s [%.2fs]\n", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), c.detail.c_str(),
                c.seconds);
    if (!c.pass)
      for (const auto& ch : c.report.checks)
        if (!ch.pass) std::printf("    %s max_defect=%.3e %s\n", ch.name.c_str(), ch.max_defect, ch.witness.c_str());
    failed += !c.pass;
  }
  return failed == 0 ? 0 : 1;
}
