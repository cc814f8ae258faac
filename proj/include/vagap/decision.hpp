#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "vagap/knowledge.hpp"

namespace vagap {

enum class EvalStatus { Holds, Fails, Undetermined };
std::string to_string(EvalStatus s);

struct ArgumentEvaluation {
  ArgumentId argument_id;
  EvalStatus status = EvalStatus::Fails;
  std::vector<FactId> missing;  // blockers when undetermined, ascending
  Rational contribution;

  friend bool operator==(const ArgumentEvaluation&, const ArgumentEvaluation&) = default;
};

enum class AssessmentStatus { Excluded, Confirmed, Scored };
std::string to_string(AssessmentStatus s);

struct OptionAssessment {
  OptionId option_id;
  AssessmentStatus status = AssessmentStatus::Scored;
  std::optional<ArgumentId> cited;  // excluding or confirming argument
  Rational net;                     // sum of holding weighing contributions
  std::vector<ArgumentEvaluation> evaluations;
  std::vector<FactId> open_facts;

  friend bool operator==(const OptionAssessment&, const OptionAssessment&) = default;
};

enum class Layer { Reactive, Deliberative };
std::string to_string(Layer l);

// ---- trace events -------------------------------------------------------

struct Perceived {
  std::vector<FactId> visible;
  std::vector<FactId> hidden;  // retrievable at cost, not yet known
  Layer layer = Layer::Reactive;
  friend bool operator==(const Perceived&, const Perceived&) = default;
};

struct Retrieved {
  FactId fact;
  int cost = 0;
  bool forced = false;  // requested by the meta-level
  friend bool operator==(const Retrieved&, const Retrieved&) = default;
};

struct Evaluated {
  OptionId option;
  ArgumentEvaluation evaluation;
  friend bool operator==(const Evaluated&, const Evaluated&) = default;
};

struct Aggregated {
  OptionAssessment assessment;  // evaluations are carried by Evaluated events
  friend bool operator==(const Aggregated&, const Aggregated&) = default;
};

struct Committed {
  std::optional<OptionId> option;  // nullopt = abstain
  Layer layer = Layer::Deliberative;
  bool final = true;
  std::optional<RuleId> rule;  // reactive rule that fired
  friend bool operator==(const Committed&, const Committed&) = default;
};

struct MetaEvent {
  nlohmann::json payload;
  friend bool operator==(const MetaEvent&, const MetaEvent&) = default;
};

using TracePayload = std::variant<Perceived, Retrieved, Evaluated, Aggregated, Committed, MetaEvent>;

struct TraceEvent {
  int cycle = 0;
  TracePayload payload;

  std::string kind() const;
  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

class DecisionTrace {
 public:
  /// Appends an event; throws std::logic_error if the cycle goes backwards
  /// or a second final commitment is added.
  void add(int cycle, TracePayload payload);
  void append(const DecisionTrace& other);

  const std::vector<TraceEvent>& events() const noexcept { return events_; }
  bool empty() const noexcept { return events_.empty(); }
  std::size_t size() const noexcept { return events_.size(); }
  int last_cycle() const noexcept { return events_.empty() ? 0 : events_.back().cycle; }

  /// The final Committed event, if any.
  const Committed* final_commitment() const;

  friend bool operator==(const DecisionTrace&, const DecisionTrace&) = default;

 private:
  std::vector<TraceEvent> events_;
};

struct Decision {
  std::optional<OptionId> chosen;  // nullopt = abstain
  DecisionTrace trace;
  std::vector<OptionAssessment> assessments;  // ascending option id

  friend bool operator==(const Decision&, const Decision&) = default;
};

/// Evaluates every argument targeting `option`, ascending by argument id.
/// With skip_norm_arguments the norm-related ones are left out entirely.
std::vector<ArgumentEvaluation> evaluate_arguments(const DecisionOption& option, const KnownFacts& known,
                                                   const KnowledgeBase& kb, bool skip_norm_arguments = false);

/// Exclusion beats confirmation beats the weighted sum.
OptionAssessment aggregate(const OptionId& option, std::vector<ArgumentEvaluation> evaluations,
                           const KnowledgeBase& kb);

struct DecideOptions {
  int start_cycle = 0;
  bool skip_norm_arguments = false;
};

/// Chooses among `options` (must be nonempty). Each option costs one cycle;
/// its Evaluated and Aggregated events are stamped start_cycle + i + 1.
Decision decide(const std::vector<DecisionOption>& options, const KnownFacts& known, const KnowledgeBase& kb,
                const DecideOptions& opts = {});

/// The selection rule on its own: first confirmed by id, else max net with
/// ties by id, else abstain.
std::optional<OptionId> choose(const std::vector<OptionAssessment>& assessments);

// ---- serialization ------------------------------------------------------

nlohmann::json to_json(const ArgumentEvaluation& e);
nlohmann::json to_json(const OptionAssessment& a, bool with_evaluations = true);
nlohmann::json to_json(const TraceEvent& e);
TraceEvent trace_event_from_json(const nlohmann::json& j);

/// One JSON object per line, in event order.
std::string to_jsonl(const DecisionTrace& trace, const nlohmann::json& context = nlohmann::json::object());
DecisionTrace trace_from_jsonl(const std::string& text);

}  // namespace vagap
