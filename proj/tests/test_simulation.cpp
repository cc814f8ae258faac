#include <doctest.h>

#include <fstream>

#include "support/fixtures.hpp"
#include "vagap/simulation.hpp"

using namespace vagap;

namespace {

DecisionRecord record(bool violating) {
  DecisionRecord r;
  r.violating = violating;
  return r;
}

}  // namespace

TEST_SUITE("simulation") {

TEST_CASE("stage presets") {
  CHECK(StagePreset::of(Stage::S1).decision_model == ModelKind::M1);
  CHECK(StagePreset::of(Stage::S2).decision_model == ModelKind::M2);
  CHECK(StagePreset::of(Stage::S3).advisor);
  CHECK_FALSE(StagePreset::of(Stage::S3).generic_user);
  CHECK(StagePreset::of(Stage::S4).generic_user);
  CHECK(stage_from("S3") == Stage::S3);
  CHECK_FALSE(stage_from("S9"));
}

TEST_CASE("events") {
  const auto spec = fixtures::bundled("ethical_workplace");
  Environment env = make_environment(spec);
  const auto initial = env.facts;

  SUBCASE("ticks without events only advance the clock") {
    env = step(env);
    CHECK(env.tick == 1);
    CHECK(env.facts == initial);
    env = step(env);
    CHECK(env.facts == initial);
    CHECK(env.pressures[AgentId("manager")] == 0.0);
  }
  SUBCASE("pressure and truth change at tick 2") {
    env = step(step(step(env)));
    CHECK(env.tick == 3);
    CHECK(env.pressures[AgentId("manager")] == doctest::Approx(0.8));
    const auto it = std::find_if(env.facts.begin(), env.facts.end(),
                                 [](const Fact& f) { return f.id == FactId("f_business_pressure"); });
    CHECK(it->truth == Truth::True);
    CHECK(settled_environment(spec).facts == env.facts);
  }
  SUBCASE("events on the same tick apply in queue order") {
    ScenarioSpec s = spec;
    s.events = {{0, SetFactTruth{FactId("f_deadline"), Truth::False}},
                {0, SetFactTruth{FactId("f_deadline"), Truth::Unknown}}};
    Environment e = step(make_environment(s));
    const auto it =
        std::find_if(e.facts.begin(), e.facts.end(), [](const Fact& f) { return f.id == FactId("f_deadline"); });
    CHECK(it->truth == Truth::Unknown);
  }
}

TEST_CASE("gap rate") {
  CHECK_THROWS_AS(gap_rate({}), std::domain_error);
  CHECK(gap_rate({record(false), record(false)}) == 0.0);
  CHECK(gap_rate({record(true), record(false)}) == 0.5);
  CHECK_FALSE(is_violating(std::nullopt, {}, KnowledgeBase{}));
}

TEST_CASE("workplace across stages") {
  const auto spec = fixtures::bundled("ethical_workplace");

  SUBCASE("S1") {
    const auto r = run(spec, 0, Stage::S1);
    REQUIRE(r.metrics.decisions.size() == 1);
    const auto& d = r.metrics.decisions[0];
    CHECK(d.tick == 3);
    CHECK(d.chosen == OptionId("opt_raise_workload"));
    CHECK(d.violating);
    CHECK(r.metrics.gap_rate == 1.0);
    CHECK(r.metrics.correction_count == 0);
    CHECK(r.artifacts[0].trace.final_commitment()->layer == Layer::Reactive);
  }
  SUBCASE("S2") {
    const auto r = run(spec, 0, Stage::S2);
    CHECK(r.metrics.gap_rate == 0.0);
    CHECK(r.metrics.correction_count == 1);
    CHECK(r.metrics.decisions[0].initial == OptionId("opt_raise_workload"));
    CHECK(r.metrics.decisions[0].chosen == OptionId("opt_redistribute"));
    REQUIRE(r.artifacts[0].report);
    CHECK(r.artifacts[0].report->bias_labels.size() == 3);
  }
  SUBCASE("S3 adopts the advice") {
    const auto r = run(spec, 0, Stage::S3);
    const auto& d = r.metrics.decisions[0];
    CHECK(d.advice == Verdict::Reject);
    CHECK(d.chosen == d.advice_recommendation);
    CHECK(d.chosen == OptionId("opt_redistribute"));
    CHECK(d.accepted_advice);
    CHECK(r.metrics.gap_rate == 0.0);
    CHECK(r.metrics.advice_outcomes.at("reject") == 1);
    CHECK(r.metrics.advice_outcomes.at("accepted") == 1);
  }
  SUBCASE("S4 runs the generic user") {
    const auto r = run(spec, 0, Stage::S4);
    REQUIRE(r.metrics.decisions.size() == 1);
    CHECK(r.metrics.decisions[0].model == ModelKind::M1);
    CHECK(r.metrics.decisions[0].advice.has_value());
    CHECK(r.metrics.gap_rate == 0.0);
  }
}

TEST_CASE("travel and procurement fixtures") {
  const auto travel = fixtures::bundled("short_haul_travel");
  CHECK(run(travel, 0, Stage::S1).metrics.decisions[0].chosen == OptionId("opt_flight"));
  CHECK(run(travel, 0, Stage::S1).metrics.gap_rate == 1.0);
  CHECK(run(travel, 0, Stage::S2).metrics.decisions[0].chosen == OptionId("opt_train"));
  const auto procurement = fixtures::bundled("sustainable_procurement");
  CHECK(run(procurement, 0, Stage::S1).metrics.decisions[0].chosen == OptionId("opt_caterer_a"));
  CHECK(run(procurement, 0, Stage::S1).metrics.gap_rate == 0.0);
}

TEST_CASE("stage ordering on the bundled suite") {
  for (const char* name : fixtures::kNames) {
    CAPTURE(name);
    const auto spec = fixtures::bundled(name);
    const double s1 = run(spec, 1, Stage::S1).metrics.gap_rate;
    CHECK(run(spec, 1, Stage::S2).metrics.gap_rate <= s1);
    CHECK(run(spec, 1, Stage::S3).metrics.gap_rate <= s1);
  }
}

TEST_CASE("runs are deterministic and written to disk") {
  const auto spec = fixtures::bundled("ethical_workplace");
  for (Stage s : {Stage::S1, Stage::S2, Stage::S3, Stage::S4})
    CHECK(trace_jsonl(run(spec, 5, s)) == trace_jsonl(run(spec, 5, s)));

  const auto dir = fixtures::scratch("simulation_runs");
  const auto out = write_run(run(spec, 5, Stage::S2), dir);
  CHECK(out == dir / "ethical_workplace__seed5__S2");
  for (const char* f : {"trace.jsonl", "metrics.json", "reports.json"}) CHECK(std::filesystem::exists(out / f));
  std::ifstream in(out / "metrics.json");
  const auto metrics = nlohmann::json::parse(in);
  CHECK(metrics["gap_rate"] == 0.0);
  CHECK(metrics["correction_count"] == 1);
}

}
