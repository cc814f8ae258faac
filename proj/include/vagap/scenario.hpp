#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "vagap/cognition.hpp"
#include "vagap/knowledge.hpp"

namespace vagap {

enum class AgentRole { DecisionMaker, Perspective };
std::string to_string(AgentRole r);

struct AgentSpec {
  AgentConfig config;
  AgentRole role = AgentRole::DecisionMaker;
  std::vector<int> decision_ticks;
  std::vector<FactId> owned_facts;  // facts this agent's perspective stands for
  std::string description;

  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

struct SetFactTruth {
  FactId fact;
  Truth value = Truth::Unknown;
  friend bool operator==(const SetFactTruth&, const SetFactTruth&) = default;
};
struct SetVisibility {
  FactId fact;
  double value = 0.0;
  friend bool operator==(const SetVisibility&, const SetVisibility&) = default;
};
struct SetPressure {
  AgentId agent;
  double value = 0.0;
  friend bool operator==(const SetPressure&, const SetPressure&) = default;
};

struct Event {
  int at_tick = 0;
  std::variant<SetFactTruth, SetVisibility, SetPressure> effect;
  friend bool operator==(const Event&, const Event&) = default;
};

struct ScenarioConfig {
  double forgetting_threshold = kDefaultForgettingThreshold;
  bool accept_advice = false;
  std::vector<AppraisalRule> appraisal_rules;
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct ScenarioSpec {
  std::string name;
  std::string description;
  KnowledgeBase kb;
  std::vector<AgentSpec> agents;
  std::vector<Event> events;
  ScenarioConfig config;

  const AgentSpec* find_agent(const AgentId& id) const;
  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

struct LoadResult {
  std::optional<ScenarioSpec> spec;
  std::vector<Issue> errors;  // parse errors use the path "/"

  bool ok() const noexcept { return spec.has_value(); }
};

LoadResult load_scenario(const std::string& document);
LoadResult load_scenario(const nlohmann::json& document);
LoadResult load_scenario_file(const std::filesystem::path& path);

/// Like load_scenario but throws ValidationError on any error.
ScenarioSpec load_scenario_or_throw(const std::string& document);

nlohmann::json scenario_to_json(const ScenarioSpec& spec);
std::string serialize_scenario(const ScenarioSpec& spec);

/// Directory holding the bundled fixtures (ethical_workplace.json, ...).
std::filesystem::path bundled_scenario_dir();

}  // namespace vagap
