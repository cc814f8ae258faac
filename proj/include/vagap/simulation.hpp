#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vagap/advisor.hpp"
#include "vagap/scenario.hpp"

namespace vagap {

enum class Stage { S1, S2, S3, S4 };
std::string to_string(Stage s);
std::optional<Stage> stage_from(const std::string& s);

/// Fixed stage to model mapping.
struct StagePreset {
  Stage stage = Stage::S1;
  ModelKind decision_model = ModelKind::M1;  // model the decision makers run
  bool advisor = false;                      // an M3 advisor reviews each decision
  bool generic_user = false;                 // decisions come from the generic user model

  static StagePreset of(Stage s);
};

/// The M1 configuration that stands in for a human decision maker.
AgentConfig generic_user_model(AgentId id = AgentId("user"));

struct Environment {
  std::vector<Fact> facts;  // ascending by id
  int tick = 0;
  std::vector<Event> queue;  // scenario order
  std::map<AgentId, double> pressures;
};

Environment make_environment(const ScenarioSpec& spec);

/// Applies the events scheduled for the current tick, in queue order.
void apply_events(Environment& env);

/// apply_events, then advance the clock by one tick.
Environment step(Environment env);

/// The scenario's environment once every scheduled event has happened.
Environment settled_environment(const ScenarioSpec& spec);

/// True when `chosen` is excluded with every fact's declared truth known.
/// Abstaining never violates.
bool is_violating(const std::optional<OptionId>& chosen, const std::vector<Fact>& env_facts, const KnowledgeBase& kb);

struct DecisionRecord {
  AgentId agent;
  int tick = 0;
  ModelKind model = ModelKind::M1;
  std::optional<OptionId> initial;  // object-level choice before any advice
  std::optional<OptionId> chosen;   // what the agent finally did
  bool violating = false;
  std::optional<Verdict> advice;
  std::optional<OptionId> advice_recommendation;
  bool accepted_advice = false;

  friend bool operator==(const DecisionRecord&, const DecisionRecord&) = default;
};

/// Throws std::domain_error on an empty log.
double gap_rate(const std::vector<DecisionRecord>& log);

struct RunMetrics {
  std::vector<DecisionRecord> decisions;
  double gap_rate = 0.0;
  int correction_count = 0;
  std::map<std::string, int> advice_outcomes;  // endorse, challenge, reject, accepted
};

struct DecisionArtifacts {
  AgentId agent;
  int tick = 0;
  DecisionTrace trace;
  std::optional<IntrospectionReport> report;  // S2, and the advisor's own run in S3/S4
  std::optional<Critique> advice;
};

struct RunResult {
  std::string scenario;
  std::uint64_t seed = 0;
  Stage stage = Stage::S1;
  RunMetrics metrics;
  std::vector<DecisionArtifacts> artifacts;
};

RunResult run(const ScenarioSpec& spec, std::uint64_t seed, Stage stage);

std::string run_dir_name(const std::string& scenario, std::uint64_t seed, Stage stage);

std::string trace_jsonl(const RunResult& r);
nlohmann::json metrics_to_json(const RunResult& r);
nlohmann::json reports_to_json(const RunResult& r);

/// Writes trace.jsonl, metrics.json and reports.json under
/// out_dir/run_dir_name(...); returns that directory.
std::filesystem::path write_run(const RunResult& r, const std::filesystem::path& out_dir);

}  // namespace vagap
