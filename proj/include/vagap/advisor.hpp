#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "vagap/metacognition.hpp"

namespace vagap {

struct Proposal {
  std::string proposer_id;
  OptionId option_id;
  std::vector<ArgumentId> stated_arguments;
  std::map<FactId, Truth> answered_facts;

  friend bool operator==(const Proposal&, const Proposal&) = default;
};

/// Validates a proposal against a knowledge base; empty when well formed.
std::vector<Issue> validate_proposal(const Proposal& p, const KnowledgeBase& kb);

enum class Verdict { Endorse, Challenge, Reject };
std::string to_string(Verdict v);

struct NormViolation {
  NormId norm;
  std::optional<ArgumentId> argument;  // holding argument that cites the norm
  friend bool operator==(const NormViolation&, const NormViolation&) = default;
};
struct MissingDecisiveArgument {
  ArgumentId argument;
  friend bool operator==(const MissingDecisiveArgument&, const MissingDecisiveArgument&) = default;
};
struct NormSilence {
  friend bool operator==(const NormSilence&, const NormSilence&) = default;
};
struct SuspectedBias {
  BiasLabel bias;
  friend bool operator==(const SuspectedBias&, const SuspectedBias&) = default;
};

struct CritiqueIssue {
  std::variant<NormViolation, MissingDecisiveArgument, NormSilence, SuspectedBias> kind;
  std::string kind_name() const;
  friend bool operator==(const CritiqueIssue&, const CritiqueIssue&) = default;
};

struct Explanation {
  std::optional<OptionId> initial_inclination;
  std::vector<BiasLabel> detected_bias;
  std::vector<FactId> omitted_information;
  std::vector<ArgumentId> decisive_arguments;
  std::optional<OptionId> recommended;
  std::string rendered;

  friend bool operator==(const Explanation&, const Explanation&) = default;
};

struct Question {
  FactId fact_id;
  NormId norm_id;
  std::string prompt;
  friend bool operator==(const Question&, const Question&) = default;
};

struct Critique {
  Verdict verdict = Verdict::Endorse;
  std::vector<CritiqueIssue> issues;
  std::optional<OptionId> recommendation;
  Explanation explanation;
  std::vector<Question> questions;

  friend bool operator==(const Critique&, const Critique&) = default;
};

struct RankedOption {
  OptionId option_id;
  OptionAssessment assessment;
  Explanation explanation;
  friend bool operator==(const RankedOption&, const RankedOption&) = default;
};

/// How the advisor reasons about itself and about the person it advises.
struct AdvisorContext {
  AgentConfig self = m2_self();
  static AgentConfig m2_self() {
    AgentConfig c;
    c.model_kind = ModelKind::M2;
    return c;
  }
  std::vector<AppraisalRule> appraisal_rules;
  std::optional<AgentConfig> user_model;  // consulted for SuspectedBias on rejection
};

class EnvironmentMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Short phrase used in rendered text, e.g. "impulsive" for impulsivity.
std::string bias_phrase(BiasLabel b);

/// Text of a question about a fact, built from its predicate and subject.
std::string question_prompt(const Fact& f);

/// The cited argument, or else the holding arguments of largest absolute
/// contribution (empty when nothing contributes).
std::vector<ArgumentId> decisive_arguments(const OptionAssessment& a);

/// Confirmed first, then scored by descending net, excluded last; ties by id.
std::vector<RankedOption> rank(const std::vector<OptionAssessment>& assessments, const KnowledgeBase& kb);

std::vector<RankedOption> recommend(const std::vector<Fact>& env_facts, const KnowledgeBase& kb,
                                    const AdvisorContext& ctx = {});

bool detect_norm_silence(const std::vector<ArgumentId>& stated_arguments, const KnowledgeBase& kb);

/// Throws ValidationError for a malformed proposal.
Critique critique(const Proposal& proposal, const std::vector<Fact>& env_facts, const KnowledgeBase& kb,
                  const AdvisorContext& ctx = {});

using AdviceTarget = std::variant<DecisionTrace, Proposal>;

/// Throws EnvironmentMismatch when a trace names ids the knowledge base does
/// not know, ValidationError for a malformed proposal.
Critique advise(const AdviceTarget& target, const std::vector<Fact>& env_facts, const KnowledgeBase& kb,
                const AdvisorContext& ctx = {});

nlohmann::json to_json(const Proposal& p);
Proposal proposal_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CritiqueIssue& i);
nlohmann::json to_json(const Explanation& e);
nlohmann::json to_json(const Question& q);
nlohmann::json to_json(const Critique& c);
nlohmann::json to_json(const RankedOption& r);

}  // namespace vagap
