#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "vagap/cognition.hpp"

namespace vagap {

/// What an M0 process must do, derived mechanically from a knowledge base.
struct NormativeSpec {
  std::map<OptionId, std::vector<ArgumentId>> required_checks;  // norm-related arguments per option
  std::set<FactId> required_facts;
  bool no_commit_before_aggregation = true;
  std::vector<OptionId> options;

  friend bool operator==(const NormativeSpec&, const NormativeSpec&) = default;
};

/// required_facts covers every fact a norm condition can resolve to plus the
/// grounds of fact-related arguments.
NormativeSpec derive_normative_spec(const KnowledgeBase& kb);

enum class BiasLabel { AvailabilityBias, Impulsivity, NormForgetting };
std::string to_string(BiasLabel b);
std::optional<BiasLabel> bias_label_from(const std::string& s);

struct ImpulsiveCommitment {
  std::optional<RuleId> rule;
  OptionId option;
  friend bool operator==(const ImpulsiveCommitment&, const ImpulsiveCommitment&) = default;
};
struct NormArgumentsAbsent {
  OptionId option;
  std::vector<ArgumentId> missing;
  friend bool operator==(const NormArgumentsAbsent&, const NormArgumentsAbsent&) = default;
};
struct HiddenInfoIgnored {
  std::vector<FactId> facts;
  friend bool operator==(const HiddenInfoIgnored&, const HiddenInfoIgnored&) = default;
};
struct NormativeDeviation {
  std::string description;
  std::vector<OptionId> unaggregated;
  friend bool operator==(const NormativeDeviation&, const NormativeDeviation&) = default;
};

struct MetaObservation {
  std::variant<ImpulsiveCommitment, NormArgumentsAbsent, HiddenInfoIgnored, NormativeDeviation> kind;
  int cycle = 0;
  std::vector<std::size_t> evidence;  // indices into the inspected trace

  std::string kind_name() const;
  friend bool operator==(const MetaObservation&, const MetaObservation&) = default;
};

std::optional<BiasLabel> bias_label_for(const MetaObservation& o);

/// Inspects the active attempt of a trace: the events after the last
/// RerunDeliberation meta event, or the whole trace if there is none.
/// Output is ordered by (kind, id).
std::vector<MetaObservation> monitor(const DecisionTrace& trace, const NormativeSpec& spec);

struct VetoCommitment {
  OptionId option;
  friend bool operator==(const VetoCommitment&, const VetoCommitment&) = default;
};
struct ExtendBudget {
  int extra_cycles = 0;
  friend bool operator==(const ExtendBudget&, const ExtendBudget&) = default;
};
struct ForceRetrieval {
  std::vector<FactId> facts;
  friend bool operator==(const ForceRetrieval&, const ForceRetrieval&) = default;
};
struct RerunDeliberation {
  bool suppress_forgetting = false;
  friend bool operator==(const RerunDeliberation&, const RerunDeliberation&) = default;
};

struct ControlAction {
  std::variant<VetoCommitment, ExtendBudget, ForceRetrieval, RerunDeliberation> kind;
  std::string kind_name() const;
  friend bool operator==(const ControlAction&, const ControlAction&) = default;
};

/// Fixed policy table. Actions come out in the order veto, force retrieval,
/// extend budget, rerun; retrievals and extensions are merged into one
/// action each. `kb` supplies retrieval costs.
std::vector<ControlAction> control(const std::vector<MetaObservation>& observations, const KnowledgeBase& kb);

struct IntrospectionReport {
  std::vector<MetaObservation> observations;
  std::vector<ControlAction> actions;
  std::optional<OptionId> initial_decision;
  std::optional<OptionId> final_decision;
  std::vector<BiasLabel> bias_labels;  // ascending, unique

  bool empty() const noexcept { return observations.empty(); }
  std::vector<FactId> omitted_facts() const;
  friend bool operator==(const IntrospectionReport&, const IntrospectionReport&) = default;
};

struct MetacognitiveResult {
  Decision decision;
  IntrospectionReport report;
  ObjectLevelRun object_level;  // the uncorrected M1 attempt
};

/// M2: the M1 pipeline under a monitor that checks before a reactive
/// commitment finalizes and after each deliberation, applying control until
/// the active attempt is clean.
MetacognitiveResult metacognitive_decide(const AgentConfig& config, const std::vector<Fact>& env_facts,
                                         const KnowledgeBase& kb,
                                         const std::vector<AppraisalRule>& appraisal_rules);

nlohmann::json to_json(const MetaObservation& o);
nlohmann::json to_json(const ControlAction& a);
nlohmann::json to_json(const IntrospectionReport& r);
nlohmann::json to_json(const NormativeSpec& s);

}  // namespace vagap
