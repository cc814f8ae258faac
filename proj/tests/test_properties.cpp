#include <doctest.h>

#include <algorithm>
#include <map>

#include "support/criteria.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"
#include "vagap/advisor.hpp"

using namespace vagap;

namespace {

std::string choice(const Decision& d) { return d.chosen ? d.chosen->str() : "abstain"; }

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("engine agrees with the reference decider") {
    const auto o = criteria::oracle_equivalence(300, 11);
    CHECK_MESSAGE(o.pass, o.detail);
  }

  TEST_CASE("an excluded option is never chosen") {
    const auto o = criteria::exclusion_dominance(300, 12);
    CHECK_MESSAGE(o.pass, o.detail);
  }

  TEST_CASE("decisions ignore collection order") {
    gen::Rng rng(13);
    for (int i = 0; i < 200; ++i) {
      auto w = gen::random_world(rng);
      const KnownFacts known(gen::random_known(rng, w));
      const Decision a = decide(gen::build(w).options(), known, gen::build(w));
      gen::shuffle(rng, w.facts);
      gen::shuffle(rng, w.norms);
      gen::shuffle(rng, w.options);
      gen::shuffle(rng, w.arguments);
      const auto kb = gen::build(w);
      const Decision b = decide(kb.options(), known, kb);
      CHECK(a.chosen == b.chosen);
      CHECK(a.assessments == b.assessments);
    }
  }

  TEST_CASE("adding a holding pro weighing argument keeps a scored winner") {
    gen::Rng rng(14);
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
      auto w = gen::random_world(rng);
      const auto known = gen::random_known(rng, w);
      const auto kb = gen::build(w);
      const Decision before = decide(kb.options(), KnownFacts(known), kb);
      if (!before.chosen) continue;
      const auto it = std::find_if(before.assessments.begin(), before.assessments.end(),
                                   [&](const OptionAssessment& a) { return a.option_id == *before.chosen; });
      if (it->status != AssessmentStatus::Scored) continue;
      w.facts.push_back({FactId("z_boost_ground"), "boost", "", Truth::True, 1.0, 0});
      w.arguments.push_back(
          {ArgumentId("z_boost"), *before.chosen, Stance::Pro, Force::Weighing, Rational(1), {}, {FactId("z_boost_ground")}, ""});
      auto known2 = known;
      known2[FactId("z_boost_ground")] = Truth::True;
      const auto kb2 = gen::build(w);
      const Decision after = decide(kb2.options(), KnownFacts(known2), kb2);
      CHECK(choice(after) == choice(before));
      ++checked;
    }
    CHECK(checked > 20);
  }

  TEST_CASE("questions are exactly the blocking facts") {
    const auto o = criteria::question_soundness(200, 15);
    CHECK_MESSAGE(o.pass, o.detail);
  }

  TEST_CASE("after every answer the verdict follows the reference exclusion") {
    gen::Rng rng(16);
    for (int i = 0; i < 150; ++i) {
      const int k = static_cast<int>(rng() % 4) + 1;
      gen::QuestionCase qc = gen::question_case(rng, k);
      const auto& kb = qc.spec.kb;
      std::map<FactId, Truth> known;
      for (const auto& f : kb.facts())
        if (f.truth != Truth::Unknown) known[f.id] = f.truth;
      for (const auto& f : qc.blocking) {
        const Truth t = (rng() % 2) ? Truth::True : Truth::False;
        qc.proposal.answered_facts[f] = t;
        known[f] = t;
      }
      const Critique c = critique(qc.proposal, kb.facts(), kb);
      CHECK(c.questions.empty());
      const oracle::World w{kb.facts(), kb.norms(), kb.options(), kb.arguments()};
      const auto ref = oracle::decide(w, known);
      const auto it = std::find_if(ref.assessments.begin(), ref.assessments.end(),
                                   [&](const oracle::OptionResult& r) { return r.option == qc.proposal.option_id.str(); });
      REQUIRE(it != ref.assessments.end());
      CHECK((c.verdict == Verdict::Reject) == (it->status == "excluded"));
    }
  }

  TEST_CASE("calm agents decide like the ideal model") {
    const auto o = criteria::bias_inertness(100, 17);
    CHECK_MESSAGE(o.pass, o.detail);
  }

  TEST_CASE("metacognition recovers the ideal decision") {
    const auto o = criteria::correction(1, 100, 18);
    CHECK_MESSAGE(o.pass, o.detail);
  }

  TEST_CASE("advice recommends what the advisor itself would do") {
    const auto o = criteria::advice_equivalence(1, 100, 19);
    CHECK_MESSAGE(o.pass, o.detail);
  }
}
