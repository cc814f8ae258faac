// Prints one PASS/FAIL line per acceptance criterion; exits 1 on any FAIL.

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "support/criteria.hpp"

int main() {
  struct Row {
    const char* name;
    std::function<criteria::Outcome()> check;
  };
  const std::vector<Row> rows = {
      {"gap-demonstration", [] { return criteria::gap_demonstration(5); }},
      {"metacognitive-correction", [] { return criteria::correction(5, 300, 101); }},
      {"advice-equivalence", [] { return criteria::advice_equivalence(5, 300, 102); }},
      {"exclusion-dominance", [] { return criteria::exclusion_dominance(1000, 103); }},
      {"oracle-equivalence", [] { return criteria::oracle_equivalence(1000, 104); }},
      {"bias-inertness", [] { return criteria::bias_inertness(200, 105); }},
      {"question-soundness", [] { return criteria::question_soundness(1000, 106); }},
      {"determinism-and-replay", [] { return criteria::determinism_and_replay(3); }},
      {"consistency-checking", [] { return criteria::consistency_checking(); }},
  };
  int failed = 0;
  for (const auto& row : rows) {
    criteria::Outcome o;
    try {
      o = row.check();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", row.name, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(rows.size()) - failed, rows.size());
  return failed == 0 ? 0 : 1;
}
