#pragma once

#include <cstdint>
#include <string>

namespace criteria {

struct Outcome {
  bool pass = true;
  std::string detail;

  /// Records a failure; keeps the first few messages.
  void fail(const std::string& why);
};

Outcome gap_demonstration(int seeds);
Outcome correction(int seeds, int random_scenarios, std::uint64_t rng_seed);
Outcome advice_equivalence(int seeds, int random_scenarios, std::uint64_t rng_seed);
Outcome exclusion_dominance(int instances, std::uint64_t rng_seed);
Outcome oracle_equivalence(int instances, std::uint64_t rng_seed);
Outcome bias_inertness(int scenarios, std::uint64_t rng_seed);
Outcome question_soundness(int instances, std::uint64_t rng_seed);
Outcome determinism_and_replay(int seeds);
Outcome consistency_checking();

}  // namespace criteria
