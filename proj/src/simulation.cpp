#include "vagap/simulation.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace vagap {

using nlohmann::json;

std::string to_string(Stage s) {
  switch (s) {
    case Stage::S1: return "S1";
    case Stage::S2: return "S2";
    case Stage::S3: return "S3";
    case Stage::S4: return "S4";
  }
  return "S1";
}

std::optional<Stage> stage_from(const std::string& s) {
  if (s == "S1") return Stage::S1;
  if (s == "S2") return Stage::S2;
  if (s == "S3") return Stage::S3;
  if (s == "S4") return Stage::S4;
  return std::nullopt;
}

StagePreset StagePreset::of(Stage s) {
  switch (s) {
    case Stage::S1: return {s, ModelKind::M1, false, false};
    case Stage::S2: return {s, ModelKind::M2, false, false};
    case Stage::S3: return {s, ModelKind::M1, true, false};
    case Stage::S4: return {s, ModelKind::M1, true, true};
  }
  return {};
}

AgentConfig generic_user_model(AgentId id) {
  AgentConfig c;
  c.id = std::move(id);
  c.model_kind = ModelKind::M1;
  c.visibility_threshold = 0.5;
  c.budget.base_cycles = 10;
  return c;
}

Environment make_environment(const ScenarioSpec& spec) {
  Environment env;
  env.facts = spec.kb.facts();
  env.queue = spec.events;
  for (const auto& a : spec.agents) env.pressures[a.config.id] = a.config.budget.pressure;
  return env;
}

void apply_events(Environment& env) {
  auto fact = [&](const FactId& id) -> Fact& {
    auto it = std::find_if(env.facts.begin(), env.facts.end(), [&](const Fact& f) { return f.id == id; });
    if (it == env.facts.end()) throw std::invalid_argument("event refers to unknown fact '" + id.str() + "'");
    return *it;
  };
  for (const auto& e : env.queue) {
    if (e.at_tick != env.tick) continue;
    std::visit(
        [&](const auto& eff) {
          using T = std::decay_t<decltype(eff)>;
          if constexpr (std::is_same_v<T, SetFactTruth>) fact(eff.fact).truth = eff.value;
          else if constexpr (std::is_same_v<T, SetVisibility>) fact(eff.fact).visibility = eff.value;
          else env.pressures[eff.agent] = eff.value;
        },
        e.effect);
  }
}

Environment step(Environment env) {
  apply_events(env);
  ++env.tick;
  return env;
}

Environment settled_environment(const ScenarioSpec& spec) {
  Environment env = make_environment(spec);
  int last = 0;
  for (const auto& e : spec.events) last = std::max(last, e.at_tick);
  while (env.tick <= last) env = step(std::move(env));
  return env;
}

bool is_violating(const std::optional<OptionId>& chosen, const std::vector<Fact>& env_facts, const KnowledgeBase& kb) {
  if (!chosen) return false;
  const DecisionOption* o = kb.find_option(*chosen);
  if (!o) throw std::invalid_argument("unknown option '" + chosen->str() + "'");
  const KnownFacts known = KnownFacts::from_facts(env_facts);
  return aggregate(o->id, evaluate_arguments(*o, known, kb), kb).status == AssessmentStatus::Excluded;
}

double gap_rate(const std::vector<DecisionRecord>& log) {
  if (log.empty()) throw std::domain_error("gap rate is undefined for an empty decision log");
  const auto violations = std::count_if(log.begin(), log.end(), [](const DecisionRecord& d) { return d.violating; });
  return static_cast<double>(violations) / static_cast<double>(log.size());
}

RunResult run(const ScenarioSpec& spec, std::uint64_t seed, Stage stage) {
  const StagePreset preset = StagePreset::of(stage);
  RunResult result;
  result.scenario = spec.name;
  result.seed = seed;
  result.stage = stage;
  RunMetrics& m = result.metrics;
  m.advice_outcomes = {{"endorse", 0}, {"challenge", 0}, {"reject", 0}, {"accepted", 0}};

  int last = 0;
  for (const auto& e : spec.events) last = std::max(last, e.at_tick);
  for (const auto& a : spec.agents)
    for (int t : a.decision_ticks) last = std::max(last, t);

  Environment env = make_environment(spec);
  const auto& rules = spec.config.appraisal_rules;
  while (env.tick <= last) {
    apply_events(env);
    for (const auto& agent : spec.agents) {
      if (agent.role != AgentRole::DecisionMaker) continue;
      if (std::find(agent.decision_ticks.begin(), agent.decision_ticks.end(), env.tick) == agent.decision_ticks.end())
        continue;

      AgentConfig config = preset.generic_user ? generic_user_model(agent.config.id) : agent.config;
      if (preset.generic_user) config.forgetting_threshold = spec.config.forgetting_threshold;
      config.budget.pressure = env.pressures[agent.config.id];
      config.model_kind = preset.decision_model;

      DecisionRecord rec{agent.config.id, env.tick, config.model_kind, {}, {}, false, {}, {}, false};
      DecisionArtifacts art{agent.config.id, env.tick, {}, {}, {}};

      if (config.model_kind == ModelKind::M2) {
        MetacognitiveResult r = metacognitive_decide(config, env.facts, spec.kb, rules);
        rec.initial = r.report.initial_decision;
        rec.chosen = r.decision.chosen;
        if (!r.report.empty()) ++m.correction_count;
        art.trace = std::move(r.decision.trace);
        art.report = std::move(r.report);
      } else {
        ObjectLevelRun r = run_object_level(config, env.facts, spec.kb, rules);
        rec.initial = r.decision.chosen;
        rec.chosen = r.decision.chosen;
        art.trace = std::move(r.decision.trace);
      }

      if (preset.advisor) {
        AdvisorContext ctx;
        ctx.self = agent.config;
        ctx.self.budget.pressure = env.pressures[agent.config.id];
        ctx.self.model_kind = ModelKind::M2;
        ctx.appraisal_rules = rules;
        const Critique c = advise(art.trace, env.facts, spec.kb, ctx);
        const MetacognitiveResult own = metacognitive_decide(ctx.self, env.facts, spec.kb, rules);
        if (!own.report.empty()) ++m.correction_count;
        art.report = own.report;
        rec.advice = c.verdict;
        rec.advice_recommendation = c.recommendation;
        ++m.advice_outcomes[to_string(c.verdict)];
        if (spec.config.accept_advice) {
          rec.accepted_advice = c.recommendation != rec.chosen;
          rec.chosen = c.recommendation;
          if (rec.accepted_advice) ++m.advice_outcomes["accepted"];
        }
        art.advice = c;
      }

      rec.violating = is_violating(rec.chosen, env.facts, spec.kb);
      m.decisions.push_back(std::move(rec));
      result.artifacts.push_back(std::move(art));
    }
    ++env.tick;
  }
  m.gap_rate = m.decisions.empty() ? 0.0 : gap_rate(m.decisions);
  return result;
}

std::string run_dir_name(const std::string& scenario, std::uint64_t seed, Stage stage) {
  return scenario + "__seed" + std::to_string(seed) + "__" + to_string(stage);
}

namespace {

json opt(const std::optional<OptionId>& o) { return o ? json(o->str()) : json(nullptr); }

}  // namespace

std::string trace_jsonl(const RunResult& r) {
  std::string out;
  for (const auto& a : r.artifacts)
    out += to_jsonl(a.trace, {{"agent", a.agent.str()}, {"tick", a.tick}, {"stage", to_string(r.stage)}});
  return out;
}

json metrics_to_json(const RunResult& r) {
  json decisions = json::array();
  for (const auto& d : r.metrics.decisions) {
    decisions.push_back({{"agent", d.agent.str()},
                         {"tick", d.tick},
                         {"model", to_string(d.model)},
                         {"initial", opt(d.initial)},
                         {"chosen", opt(d.chosen)},
                         {"violating", d.violating},
                         {"advice", d.advice ? json(to_string(*d.advice)) : json(nullptr)},
                         {"advice_recommendation", opt(d.advice_recommendation)},
                         {"accepted_advice", d.accepted_advice}});
  }
  return {{"scenario", r.scenario},
          {"seed", r.seed},
          {"preset", to_string(r.stage)},
          {"gap_rate", r.metrics.gap_rate},
          {"correction_count", r.metrics.correction_count},
          {"advice_outcomes", r.metrics.advice_outcomes},
          {"decisions", std::move(decisions)}};
}

json reports_to_json(const RunResult& r) {
  json out = json::array();
  for (const auto& a : r.artifacts) {
    out.push_back({{"agent", a.agent.str()},
                   {"tick", a.tick},
                   {"report", a.report ? to_json(*a.report) : json(nullptr)},
                   {"advice", a.advice ? to_json(*a.advice) : json(nullptr)}});
  }
  return out;
}

std::filesystem::path write_run(const RunResult& r, const std::filesystem::path& out_dir) {
  const auto dir = out_dir / run_dir_name(r.scenario, r.seed, r.stage);
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const std::string& content) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << content;
  };
  write("trace.jsonl", trace_jsonl(r));
  write("metrics.json", metrics_to_json(r).dump(2) + "\n");
  write("reports.json", reports_to_json(r).dump(2) + "\n");
  return dir;
}

}  // namespace vagap
