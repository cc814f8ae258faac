#include "support/criteria.hpp"

#include <algorithm>
#include <sstream>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"
#include "vagap/advisor.hpp"
#include "vagap/metacognition.hpp"
#include "vagap/session.hpp"
#include "vagap/simulation.hpp"

namespace criteria {

using namespace vagap;

void Outcome::fail(const std::string& why) {
  if (pass || std::count(detail.begin(), detail.end(), ';') < 3) detail += (detail.empty() ? "" : "; ") + why;
  pass = false;
}

namespace {

std::string show(const std::optional<OptionId>& o) { return o ? o->str() : "abstain"; }

AgentConfig as(AgentConfig c, ModelKind k) {
  c.model_kind = k;
  return c;
}

/// Environment and agent configuration at every decision point of a scenario.
struct DecisionPoint {
  AgentConfig config;
  std::vector<Fact> facts;
  int tick = 0;
};

std::vector<DecisionPoint> decision_points(const ScenarioSpec& spec) {
  std::vector<DecisionPoint> out;
  int last = 0;
  for (const auto& e : spec.events) last = std::max(last, e.at_tick);
  for (const auto& a : spec.agents)
    for (int t : a.decision_ticks) last = std::max(last, t);
  Environment env = make_environment(spec);
  while (env.tick <= last) {
    apply_events(env);
    for (const auto& a : spec.agents) {
      if (a.role != AgentRole::DecisionMaker) continue;
      if (std::find(a.decision_ticks.begin(), a.decision_ticks.end(), env.tick) == a.decision_ticks.end()) continue;
      AgentConfig c = a.config;
      c.budget.pressure = env.pressures[a.config.id];
      out.push_back({c, env.facts, env.tick});
    }
    ++env.tick;
  }
  return out;
}

bool m2_matches_m0(const ScenarioSpec& spec, Outcome& o, const std::string& label) {
  bool ok = true;
  for (const auto& p : decision_points(spec)) {
    const auto m2 = metacognitive_decide(as(p.config, ModelKind::M2), p.facts, spec.kb, spec.config.appraisal_rules);
    const auto m0 = agent_decide(as(p.config, ModelKind::M0), p.facts, spec.kb, spec.config.appraisal_rules);
    if (m2.decision.chosen != m0.chosen) {
      o.fail(label + " tick " + std::to_string(p.tick) + ": M2 " + show(m2.decision.chosen) + " vs M0 " +
             show(m0.chosen));
      ok = false;
    }
  }
  return ok;
}

}  // namespace

Outcome gap_demonstration(int seeds) {
  Outcome o;
  const auto spec = fixtures::bundled("ethical_workplace");
  std::string first;
  for (int seed = 0; seed < seeds; ++seed) {
    for (int repeat = 0; repeat < 2; ++repeat) {
      const RunResult r = run(spec, static_cast<std::uint64_t>(seed), Stage::S1);
      if (r.metrics.gap_rate != 1.0) o.fail("seed " + std::to_string(seed) + " gap_rate " + std::to_string(r.metrics.gap_rate));
      for (const auto& a : r.artifacts) {
        const Committed* c = a.trace.final_commitment();
        if (!c || c->layer != Layer::Reactive) o.fail("decision was not a reactive commitment");
      }
      const std::string metrics = metrics_to_json(r).dump();
      if (seed == 0 && repeat == 0) first = metrics;
      if (repeat == 1 && seed == 0 && metrics != first) o.fail("repeated run differs");
    }
  }
  o.detail = o.pass ? "gap_rate 1.0 over " + std::to_string(seeds) + " seeds, reactive commitment" : o.detail;
  return o;
}

Outcome correction(int seeds, int random_scenarios, std::uint64_t rng_seed) {
  Outcome o;
  const auto spec = fixtures::bundled("ethical_workplace");
  for (int seed = 0; seed < seeds; ++seed) {
    const RunResult r = run(spec, static_cast<std::uint64_t>(seed), Stage::S2);
    if (r.metrics.gap_rate != 0.0) o.fail("S2 gap_rate " + std::to_string(r.metrics.gap_rate));
    if (r.metrics.correction_count != 1) o.fail("correction_count " + std::to_string(r.metrics.correction_count));
    const std::vector<BiasLabel> all = {BiasLabel::AvailabilityBias, BiasLabel::Impulsivity, BiasLabel::NormForgetting};
    if (r.artifacts.empty() || !r.artifacts[0].report || r.artifacts[0].report->bias_labels != all)
      o.fail("report lacks the three bias labels");
  }
  for (const char* name : fixtures::kNames) m2_matches_m0(fixtures::bundled(name), o, name);
  gen::Rng rng(rng_seed);
  for (int i = 0; i < random_scenarios; ++i) m2_matches_m0(gen::random_scenario(rng, false), o, "random #" + std::to_string(i));
  if (o.pass)
    o.detail = "S2 gap 0.0, 1 correction, 3 labels; M2 == M0 on 3 fixtures + " + std::to_string(random_scenarios) +
               " random scenarios";
  return o;
}

Outcome advice_equivalence(int seeds, int random_scenarios, std::uint64_t rng_seed) {
  Outcome o;
  auto check_scenario = [&](const ScenarioSpec& spec, const std::string& label) {
    for (const auto& p : decision_points(spec)) {
      const auto m1 = agent_decide(as(p.config, ModelKind::M1), p.facts, spec.kb, spec.config.appraisal_rules);
      AdvisorContext ctx;
      ctx.self = as(p.config, ModelKind::M2);
      ctx.appraisal_rules = spec.config.appraisal_rules;
      const Critique c = advise(m1.trace, p.facts, spec.kb, ctx);
      const auto m2 = metacognitive_decide(ctx.self, p.facts, spec.kb, spec.config.appraisal_rules);
      if (c.recommendation != m2.report.final_decision)
        o.fail(label + ": advice " + show(c.recommendation) + " vs M2 " + show(m2.report.final_decision));
    }
  };
  for (const char* name : fixtures::kNames) {
    const auto spec = fixtures::bundled(name);
    for (int seed = 0; seed < seeds; ++seed) {
      check_scenario(spec, name);
      ScenarioSpec accepting = spec;
      accepting.config.accept_advice = true;
      const double s1 = run(accepting, static_cast<std::uint64_t>(seed), Stage::S1).metrics.gap_rate;
      const RunResult s3 = run(accepting, static_cast<std::uint64_t>(seed), Stage::S3);
      if (s3.metrics.gap_rate > s1) o.fail(std::string(name) + ": S3 gap above S1");
      for (const auto& d : s3.metrics.decisions)
        if (d.chosen != d.advice_recommendation) o.fail(std::string(name) + ": advice not adopted");
      if (std::string(name) == "ethical_workplace" && s3.metrics.gap_rate != 0.0) o.fail("workplace S3 gap not 0.0");
    }
  }
  gen::Rng rng(rng_seed);
  for (int i = 0; i < random_scenarios; ++i) check_scenario(gen::random_scenario(rng, false), "random #" + std::to_string(i));
  if (o.pass)
    o.detail = "3 fixtures x " + std::to_string(seeds) + " seeds + " + std::to_string(random_scenarios) +
               " random scenarios; S3 <= S1, workplace S3 = 0.0";
  return o;
}

Outcome exclusion_dominance(int instances, std::uint64_t rng_seed) {
  Outcome o;
  gen::Rng rng(rng_seed);
  int with_exclusion = 0;
  for (int i = 0; i < instances; ++i) {
    const auto w = gen::random_world(rng);
    const auto kb = gen::build(w);
    const KnownFacts known(gen::random_known(rng, w));
    const Decision d = decide(kb.options(), known, kb);
    for (const auto& option : kb.options()) {
      bool excluded = false;
      for (const auto& e : evaluate_arguments(option, known, kb))
        excluded = excluded || (e.status == EvalStatus::Holds && kb.find_argument(e.argument_id)->force == Force::Excluding);
      if (!excluded) continue;
      ++with_exclusion;
      if (d.chosen == option.id) o.fail("instance " + std::to_string(i) + " chose excluded " + option.id.str());
    }
  }
  if (o.pass)
    o.detail = "0 violations over " + std::to_string(instances) + " instances (" + std::to_string(with_exclusion) +
               " excluded options)";
  return o;
}

Outcome oracle_equivalence(int instances, std::uint64_t rng_seed) {
  Outcome o;
  gen::Rng rng(rng_seed);
  for (int i = 0; i < instances; ++i) {
    auto w = gen::random_world(rng);
    const auto known = gen::random_known(rng, w);
    const auto want = oracle::decide(w, known);
    gen::shuffle(rng, w.options);
    gen::shuffle(rng, w.arguments);
    const auto kb = gen::build(w);
    const Decision got = decide(kb.options(), KnownFacts(known), kb);
    const std::string got_choice = got.chosen ? got.chosen->str() : "abstain";
    if (got_choice != want.chosen.value_or("abstain"))
      o.fail("instance " + std::to_string(i) + " chose " + got_choice + ", oracle " + want.chosen.value_or("abstain"));
    if (got.assessments.size() != want.assessments.size()) {
      o.fail("instance " + std::to_string(i) + " assessment count");
      continue;
    }
    for (std::size_t k = 0; k < got.assessments.size(); ++k) {
      const auto a = oracle::describe(oracle::from_engine(got.assessments[k]));
      const auto b = oracle::describe(want.assessments[k]);
      if (a != b) o.fail("instance " + std::to_string(i) + ": " + a + " != " + b);
    }
  }
  if (o.pass) o.detail = "exact agreement on " + std::to_string(instances) + " instances";
  return o;
}

Outcome bias_inertness(int scenarios, std::uint64_t rng_seed) {
  Outcome o;
  gen::Rng rng(rng_seed);
  for (int i = 0; i < scenarios; ++i) {
    const ScenarioSpec spec = gen::random_scenario(rng, true);
    const AgentConfig& c = spec.agents[0].config;
    const auto m1 = agent_decide(as(c, ModelKind::M1), spec.kb.facts(), spec.kb, spec.config.appraisal_rules);
    const auto m0 = agent_decide(as(c, ModelKind::M0), spec.kb.facts(), spec.kb, spec.config.appraisal_rules);
    if (m1.chosen != m0.chosen) o.fail("scenario " + std::to_string(i) + ": M1 " + show(m1.chosen) + " vs M0 " + show(m0.chosen));
  }
  if (o.pass) o.detail = "M1 == M0 on " + std::to_string(scenarios) + " scenarios";
  return o;
}

Outcome question_soundness(int instances, std::uint64_t rng_seed) {
  Outcome o;
  gen::Rng rng(rng_seed);
  for (int i = 0; i < instances; ++i) {
    const int k = static_cast<int>(rng() % 5);
    gen::QuestionCase qc = gen::question_case(rng, k);
    const auto& facts = qc.spec.kb.facts();
    const Critique c = critique(qc.proposal, facts, qc.spec.kb);
    std::vector<FactId> asked;
    for (const auto& q : c.questions) asked.push_back(q.fact_id);
    std::sort(asked.begin(), asked.end());
    if (asked != qc.blocking) {
      o.fail("instance " + std::to_string(i) + ": " + std::to_string(asked.size()) + " questions for k=" + std::to_string(k));
      continue;
    }
    for (const auto& f : asked) qc.proposal.answered_facts[f] = (rng() % 2) ? Truth::True : Truth::False;
    const Critique after = critique(qc.proposal, facts, qc.spec.kb);
    if (!after.questions.empty()) o.fail("instance " + std::to_string(i) + ": questions remain after answering");
  }
  if (o.pass) o.detail = "exactly k questions (k <= 4) and none after answering, " + std::to_string(instances) + " instances";
  return o;
}

Outcome determinism_and_replay(int seeds) {
  Outcome o;
  for (const char* name : fixtures::kNames) {
    const auto spec = fixtures::bundled(name);
    for (int seed = 0; seed < seeds; ++seed)
      for (Stage s : {Stage::S1, Stage::S2, Stage::S3, Stage::S4}) {
        const auto a = trace_jsonl(run(spec, static_cast<std::uint64_t>(seed), s));
        const auto b = trace_jsonl(run(spec, static_cast<std::uint64_t>(seed), s));
        if (a != b) o.fail(std::string(name) + " " + to_string(s) + " traces differ");
      }
  }

  const auto dir = fixtures::scratch("acceptance_sessions");
  const ScenarioCatalog catalog(bundled_scenario_dir());
  std::vector<std::string> ids;
  {
    SessionManager m(catalog, dir);
    for (const char* name : fixtures::kNames) {
      const Session s = m.create(name);
      ids.push_back(s.id);
      // Propose every option in turn, answering whatever is asked.
      for (const auto& ranked : s.options) {
        Proposal p{"user", ranked.option_id, ranked.explanation.decisive_arguments, {}};
        Critique c = m.submit_proposal(s.id, p);
        bool flip = false;
        while (!c.questions.empty()) {
          c = m.answer_question(s.id, c.questions.front().fact_id, flip ? Truth::True : Truth::False);
          flip = !flip;
        }
      }
      m.resolve(s.id, s.options.back().option_id);
    }
  }
  int critiques = 0;
  for (const auto& id : ids) {
    const auto history = SessionManager::load_history(dir / (id + ".jsonl"));
    for (const auto& e : history) critiques += e.type == "critique_issued";
    if (!SessionManager::replay_matches(history, catalog)) o.fail("replay of " + id + " differs");
  }
  if (o.pass)
    o.detail = "byte-identical traces for 3 fixtures x 4 presets x " + std::to_string(seeds) + " seeds; " +
               std::to_string(ids.size()) + " persisted sessions replay " + std::to_string(critiques) +
               " critiques identically";
  return o;
}

Outcome consistency_checking() {
  Outcome o;
  const auto kb = KnowledgeBase::create(
      {{ValueId("v"), "well-being", "", true}},
      {{NormId("n_harm"), {ValueId("v")}, Modality::Prohibition, {{"harms_staff", false}}, ""}},
      {{FactId("f"), "harms_staff", "option", Truth::True, 1.0, 0}},
      {{OptionId("o"), OptionKind::Action, "", {FactId("f")}}},
      {{ArgumentId("a_pro"), OptionId("o"), Stance::Pro, Force::Confirming, {}, std::nullopt, {FactId("f")}, ""},
       {ArgumentId("a_con"), OptionId("o"), Stance::Con, Force::Excluding, {}, NormId("n_harm"), {}, ""}});
  const auto found = check_consistency(kb);
  const Inconsistency expected{Inconsistency::Category::NormViolatingArgumentPro, OptionId("o"), {NormId("n_harm")},
                               ArgumentId("a_pro")};
  if (found != std::vector<Inconsistency>{expected}) o.fail("constructed kb: " + std::to_string(found.size()) + " records");
  for (const char* name : fixtures::kNames)
    if (const auto f = check_consistency(fixtures::bundled(name).kb); !f.empty())
      o.fail(std::string(name) + ": " + std::to_string(f.size()) + " records");
  if (o.pass) o.detail = "constructed kb flagged; 3 fixtures clean";
  return o;
}

}  // namespace criteria
