#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vagap/decision.hpp"
#include "vagap/knowledge.hpp"

namespace vagap {

enum class Valence { Opportunity, Threat, Neutral };
std::string to_string(Valence v);

enum class ModelKind { M0, M1, M2, M3 };
std::string to_string(ModelKind k);

/// Literal over a concrete fact, satisfied only when the fact is visible and
/// its truth matches (true, or false when negated).
struct FactLiteral {
  FactId fact;
  bool negated = false;
  friend bool operator==(const FactLiteral&, const FactLiteral&) = default;
};

struct AppraisalRule {
  RuleId id;
  std::vector<FactLiteral> pattern;
  Valence valence = Valence::Threat;
  double urgency = 0.0;
  friend bool operator==(const AppraisalRule&, const AppraisalRule&) = default;
};

struct Appraisal {
  Valence valence = Valence::Neutral;
  double urgency = 0.0;
  std::optional<RuleId> rule;
  friend bool operator==(const Appraisal&, const Appraisal&) = default;
};

struct ReactiveRule {
  RuleId id;
  std::vector<FactLiteral> trigger;
  std::optional<double> min_urgency;
  OptionId response;
  int latency = 1;
  friend bool operator==(const ReactiveRule&, const ReactiveRule&) = default;
};

struct CognitiveBudget {
  int base_cycles = 20;
  double pressure = 0.0;

  /// ceil(base_cycles * (1 - pressure)), never negative.
  int effective_cycles() const { return effective_cycles(pressure); }
  int effective_cycles(double with_pressure) const;
  friend bool operator==(const CognitiveBudget&, const CognitiveBudget&) = default;
};

inline constexpr double kDefaultForgettingThreshold = 0.7;

struct AgentConfig {
  AgentId id;
  ModelKind model_kind = ModelKind::M1;
  double visibility_threshold = 0.5;
  std::vector<ReactiveRule> reactive_rules;
  CognitiveBudget budget;
  std::optional<std::set<FactId>> perspective;  // nullopt: every fact
  double forgetting_threshold = kDefaultForgettingThreshold;

  bool in_perspective(const FactId& f) const { return !perspective || perspective->contains(f); }
  friend bool operator==(const AgentConfig&, const AgentConfig&) = default;
};

struct Workspace {
  KnownFacts visible;               // visible facts with their truth
  std::vector<FactId> visible_ids;  // ascending
  std::vector<Fact> hidden;         // retrievable facts, ascending by id
  int cycle = 0;

  std::vector<FactId> hidden_fact_ids() const;
};

Workspace perceive(const std::vector<Fact>& env_facts, const AgentConfig& config);

bool literal_satisfied(const FactLiteral& lit, const Workspace& ws);

/// The matching rule with maximal urgency (ties: lowest id); neutral/0 if none.
Appraisal appraise(const Workspace& ws, const std::vector<AppraisalRule>& rules);

struct PendingCommitment {
  RuleId rule;
  OptionId option;
  int commit_cycle = 0;
  friend bool operator==(const PendingCommitment&, const PendingCommitment&) = default;
};

std::optional<PendingCommitment> reactive_step(const Workspace& ws, const AgentConfig& config,
                                               const Appraisal& appraisal);

struct DeliberationOptions {
  std::vector<FactId> forced;  // retrieved first, in this order
  bool skip_norm_arguments = false;
};

struct DeliberationResult {
  Decision decision;
  int cycles_used = 0;
  bool complete = false;  // every option was aggregated
  KnownFacts known;       // what was known when deciding
};

/// Retrieves hidden facts cheapest-first (ties by id) while keeping one
/// cycle per option in reserve, then aggregates as many options as the
/// remaining budget allows. An incomplete deliberation abstains.
DeliberationResult deliberate(const Workspace& ws, const KnowledgeBase& kb, int budget_cycles,
                              const DeliberationOptions& opts = {});

/// Everything the object level did for one decision; the metacognitive
/// layer inspects this.
struct ObjectLevelRun {
  Decision decision;
  Workspace workspace;
  Appraisal appraisal;
  int effective_budget = 0;
  bool forgetting = false;
  std::optional<PendingCommitment> reactive;  // set when the reactive layer won
};

/// M0 or M1 behaviour. With pending_reactive the reactive commitment is
/// recorded as non-final so a monitor can intercept it.
ObjectLevelRun run_object_level(const AgentConfig& config, const std::vector<Fact>& env_facts,
                                const KnowledgeBase& kb, const std::vector<AppraisalRule>& appraisal_rules,
                                bool pending_reactive = false);

/// M0: unlimited deliberation over the whole perspective.
/// M1: perception, appraisal and a cycle race between the two layers.
/// Throws std::invalid_argument for M2/M3 configs.
Decision agent_decide(const AgentConfig& config, const std::vector<Fact>& env_facts, const KnowledgeBase& kb,
                      const std::vector<AppraisalRule>& appraisal_rules);

}  // namespace vagap
