#include "vagap/decision.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace vagap {

std::string to_string(EvalStatus s) {
  switch (s) {
    case EvalStatus::Holds: return "holds";
    case EvalStatus::Fails: return "fails";
    case EvalStatus::Undetermined: return "undetermined";
  }
  return "fails";
}

std::string to_string(AssessmentStatus s) {
  switch (s) {
    case AssessmentStatus::Excluded: return "excluded";
    case AssessmentStatus::Confirmed: return "confirmed";
    case AssessmentStatus::Scored: return "scored";
  }
  return "scored";
}

std::string to_string(Layer l) { return l == Layer::Reactive ? "reactive" : "deliberative"; }

std::string TraceEvent::kind() const {
  static constexpr const char* names[] = {"Perceived", "Retrieved", "Evaluated", "Aggregated", "Committed", "MetaEvent"};
  return names[payload.index()];
}

void DecisionTrace::add(int cycle, TracePayload payload) {
  if (!events_.empty() && cycle < events_.back().cycle)
    throw std::logic_error("trace cycle counter went backwards");
  if (const auto* c = std::get_if<Committed>(&payload); c && c->final && final_commitment())
    throw std::logic_error("trace already has a final commitment");
  events_.push_back({cycle, std::move(payload)});
}

void DecisionTrace::append(const DecisionTrace& other) {
  for (const auto& e : other.events_) add(e.cycle, e.payload);
}

const Committed* DecisionTrace::final_commitment() const {
  for (const auto& e : events_)
    if (const auto* c = std::get_if<Committed>(&e.payload); c && c->final) return c;
  return nullptr;
}

namespace {

ArgumentEvaluation evaluate_one(const Argument& arg, const DecisionOption& option, const KnownFacts& known,
                                const KnowledgeBase& kb) {
  ArgumentEvaluation ev;
  ev.argument_id = arg.id;
  if (arg.norm) {
    const NormApplication app = norm_applies(kb, *kb.find_norm(*arg.norm), option, known);
    switch (app.status) {
      case NormApplication::Status::Applies: ev.status = EvalStatus::Holds; break;
      case NormApplication::Status::NotApplicable: ev.status = EvalStatus::Fails; break;
      case NormApplication::Status::Unknown:
        ev.status = EvalStatus::Undetermined;
        ev.missing = app.missing;
        break;
    }
  } else {
    bool any_false = false;
    std::set<FactId> missing;
    for (const auto& f : arg.facts) {
      const Truth t = known.truth(f);
      if (t == Truth::False) any_false = true;
      if (t == Truth::Unknown) missing.insert(f);
    }
    if (any_false) {
      ev.status = EvalStatus::Fails;
    } else if (!missing.empty()) {
      ev.status = EvalStatus::Undetermined;
      ev.missing.assign(missing.begin(), missing.end());
    } else {
      ev.status = EvalStatus::Holds;
    }
  }
  if (ev.status == EvalStatus::Holds && arg.force == Force::Weighing) ev.contribution = arg.weight;
  return ev;
}

}  // namespace

std::vector<ArgumentEvaluation> evaluate_arguments(const DecisionOption& option, const KnownFacts& known,
                                                   const KnowledgeBase& kb, bool skip_norm_arguments) {
  std::vector<ArgumentEvaluation> out;
  for (const Argument* arg : kb.arguments_for(option.id)) {
    if (skip_norm_arguments && arg->norm_related()) continue;
    out.push_back(evaluate_one(*arg, option, known, kb));
  }
  return out;
}

OptionAssessment aggregate(const OptionId& option, std::vector<ArgumentEvaluation> evaluations,
                           const KnowledgeBase& kb) {
  std::sort(evaluations.begin(), evaluations.end(),
            [](const auto& a, const auto& b) { return a.argument_id < b.argument_id; });

  OptionAssessment out;
  out.option_id = option;
  std::optional<ArgumentId> excluding;
  std::optional<ArgumentId> confirming;
  std::set<FactId> open;
  for (const auto& ev : evaluations) {
    const Argument* arg = kb.find_argument(ev.argument_id);
    if (ev.status == EvalStatus::Undetermined) open.insert(ev.missing.begin(), ev.missing.end());
    if (ev.status != EvalStatus::Holds) continue;
    if (arg->force == Force::Excluding && !excluding) excluding = arg->id;
    if (arg->force == Force::Confirming && !confirming) confirming = arg->id;
    out.net += ev.contribution;
  }
  if (excluding) {
    out.status = AssessmentStatus::Excluded;
    out.cited = excluding;
  } else if (confirming) {
    out.status = AssessmentStatus::Confirmed;
    out.cited = confirming;
  } else {
    out.status = AssessmentStatus::Scored;
  }
  out.open_facts.assign(open.begin(), open.end());
  out.evaluations = std::move(evaluations);
  return out;
}

std::optional<OptionId> choose(const std::vector<OptionAssessment>& assessments) {
  std::vector<const OptionAssessment*> sorted;
  for (const auto& a : assessments) sorted.push_back(&a);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->option_id < b->option_id; });

  for (const auto* a : sorted)
    if (a->status == AssessmentStatus::Confirmed) return a->option_id;
  const OptionAssessment* best = nullptr;
  for (const auto* a : sorted) {
    if (a->status != AssessmentStatus::Scored) continue;
    if (!best || a->net > best->net) best = a;
  }
  if (best) return best->option_id;
  return std::nullopt;
}

Decision decide(const std::vector<DecisionOption>& options, const KnownFacts& known, const KnowledgeBase& kb,
                const DecideOptions& opts) {
  if (options.empty()) throw std::invalid_argument("decide needs at least one option");
  std::vector<const DecisionOption*> sorted;
  for (const auto& o : options) sorted.push_back(&o);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->id < b->id; });

  Decision d;
  int cycle = opts.start_cycle;
  for (const auto* option : sorted) {
    ++cycle;
    auto evaluations = evaluate_arguments(*option, known, kb, opts.skip_norm_arguments);
    for (const auto& ev : evaluations) d.trace.add(cycle, Evaluated{option->id, ev});
    OptionAssessment assessment = aggregate(option->id, std::move(evaluations), kb);
    OptionAssessment summary = assessment;
    summary.evaluations.clear();
    d.trace.add(cycle, Aggregated{std::move(summary)});
    d.assessments.push_back(std::move(assessment));
  }
  d.chosen = choose(d.assessments);
  return d;
}

}  // namespace vagap
