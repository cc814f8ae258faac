#include "vagap/cognition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vagap {

std::string to_string(Valence v) {
  switch (v) {
    case Valence::Opportunity: return "opportunity";
    case Valence::Threat: return "threat";
    case Valence::Neutral: return "neutral";
  }
  return "neutral";
}

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::M0: return "M0";
    case ModelKind::M1: return "M1";
    case ModelKind::M2: return "M2";
    case ModelKind::M3: return "M3";
  }
  return "M1";
}

int CognitiveBudget::effective_cycles(double with_pressure) const {
  const double p = std::clamp(with_pressure, 0.0, 1.0);
  // The epsilon keeps 12 * (1 - 0.8) at 3 rather than 3.0000000000000004 -> 4.
  const double raw = static_cast<double>(base_cycles) * (1.0 - p);
  return std::max(0, static_cast<int>(std::ceil(raw - 1e-9)));
}

std::vector<FactId> Workspace::hidden_fact_ids() const {
  std::vector<FactId> out;
  for (const auto& f : hidden) out.push_back(f.id);
  return out;
}

Workspace perceive(const std::vector<Fact>& env_facts, const AgentConfig& config) {
  Workspace ws;
  std::vector<const Fact*> sorted;
  for (const auto& f : env_facts) sorted.push_back(&f);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->id < b->id; });
  for (const Fact* f : sorted) {
    if (!config.in_perspective(f->id)) continue;
    if (f->visibility >= config.visibility_threshold) {
      ws.visible.set(f->id, f->truth);
      ws.visible_ids.push_back(f->id);
    } else {
      ws.hidden.push_back(*f);
    }
  }
  return ws;
}

bool literal_satisfied(const FactLiteral& lit, const Workspace& ws) {
  if (!ws.visible.knows(lit.fact)) return false;
  const Truth t = ws.visible.truth(lit.fact);
  return lit.negated ? t == Truth::False : t == Truth::True;
}

namespace {

bool all_satisfied(const std::vector<FactLiteral>& lits, const Workspace& ws) {
  return std::all_of(lits.begin(), lits.end(), [&](const auto& l) { return literal_satisfied(l, ws); });
}

}  // namespace

Appraisal appraise(const Workspace& ws, const std::vector<AppraisalRule>& rules) {
  const AppraisalRule* best = nullptr;
  for (const auto& r : rules) {
    if (!all_satisfied(r.pattern, ws)) continue;
    if (!best || r.urgency > best->urgency || (r.urgency == best->urgency && r.id < best->id)) best = &r;
  }
  if (!best || best->valence == Valence::Neutral) return {};
  return {best->valence, std::clamp(best->urgency, 0.0, 1.0), best->id};
}

std::optional<PendingCommitment> reactive_step(const Workspace& ws, const AgentConfig& config,
                                               const Appraisal& appraisal) {
  if (config.model_kind == ModelKind::M0) return std::nullopt;
  std::vector<const ReactiveRule*> rules;
  for (const auto& r : config.reactive_rules) rules.push_back(&r);
  std::sort(rules.begin(), rules.end(), [](auto* a, auto* b) { return a->id < b->id; });
  for (const auto* r : rules) {
    if (!all_satisfied(r->trigger, ws)) continue;
    if (r->min_urgency && *r->min_urgency > appraisal.urgency) continue;
    return PendingCommitment{r->id, r->response, ws.cycle + r->latency};
  }
  return std::nullopt;
}

DeliberationResult deliberate(const Workspace& ws, const KnowledgeBase& kb, int budget_cycles,
                              const DeliberationOptions& opts) {
  if (budget_cycles < 0) throw std::invalid_argument("budget_cycles must be >= 0");
  DeliberationResult out;
  out.known = ws.visible;
  if (budget_cycles == 0 || kb.options().empty()) return out;

  const int n_options = static_cast<int>(kb.options().size());
  int spent = 0;
  std::set<FactId> retrieved;

  auto retrieve = [&](const Fact& f, bool forced) {
    spent += f.retrieval_cost;
    out.known.set(f.id, f.truth);
    retrieved.insert(f.id);
    out.decision.trace.add(ws.cycle + spent, Retrieved{f.id, f.retrieval_cost, forced});
  };

  for (const auto& fid : opts.forced) {
    auto it = std::find_if(ws.hidden.begin(), ws.hidden.end(), [&](const Fact& f) { return f.id == fid; });
    if (it == ws.hidden.end() || retrieved.contains(fid)) continue;
    if (spent + it->retrieval_cost > budget_cycles) break;
    retrieve(*it, true);
  }

  std::vector<const Fact*> queue;
  for (const auto& f : ws.hidden)
    if (!retrieved.contains(f.id)) queue.push_back(&f);
  std::sort(queue.begin(), queue.end(), [](auto* a, auto* b) {
    return a->retrieval_cost != b->retrieval_cost ? a->retrieval_cost < b->retrieval_cost : a->id < b->id;
  });
  for (const Fact* f : queue) {
    if (spent + f->retrieval_cost + n_options > budget_cycles) break;
    retrieve(*f, false);
  }

  const int affordable = std::min(n_options, budget_cycles - spent);
  if (affordable <= 0) {
    out.cycles_used = spent;
    return out;
  }
  std::vector<DecisionOption> options(kb.options().begin(), kb.options().begin() + affordable);
  Decision partial = decide(options, out.known, kb, {ws.cycle + spent, opts.skip_norm_arguments});
  out.decision.trace.append(partial.trace);
  out.decision.assessments = std::move(partial.assessments);
  out.cycles_used = spent + affordable;
  out.complete = affordable == n_options;
  if (out.complete) out.decision.chosen = partial.chosen;
  return out;
}

namespace {

int total_hidden_cost(const Workspace& ws) {
  int total = 0;
  for (const auto& f : ws.hidden) total += f.retrieval_cost;
  return total;
}

}  // namespace

ObjectLevelRun run_object_level(const AgentConfig& config, const std::vector<Fact>& env_facts,
                                const KnowledgeBase& kb, const std::vector<AppraisalRule>& appraisal_rules,
                                bool pending_reactive) {
  ObjectLevelRun run;
  run.workspace = perceive(env_facts, config);
  const Workspace& ws = run.workspace;
  DecisionTrace& trace = run.decision.trace;
  const int n_options = static_cast<int>(kb.options().size());

  if (config.model_kind == ModelKind::M0) {
    trace.add(ws.cycle, Perceived{ws.visible_ids, ws.hidden_fact_ids(), Layer::Deliberative});
    run.effective_budget = total_hidden_cost(ws) + n_options;
    DeliberationResult d = deliberate(ws, kb, run.effective_budget);
    trace.append(d.decision.trace);
    run.decision.assessments = std::move(d.decision.assessments);
    run.decision.chosen = d.decision.chosen;
    trace.add(ws.cycle + d.cycles_used, Committed{d.decision.chosen, Layer::Deliberative, true, std::nullopt});
    return run;
  }

  trace.add(ws.cycle, Perceived{ws.visible_ids, ws.hidden_fact_ids(), Layer::Reactive});
  run.appraisal = appraise(ws, appraisal_rules);
  run.forgetting = run.appraisal.urgency >= config.forgetting_threshold;
  const double pressure = std::max(config.budget.pressure, run.appraisal.urgency);
  run.effective_budget = config.budget.effective_cycles(pressure);

  DeliberationResult d = deliberate(ws, kb, run.effective_budget, {{}, run.forgetting});
  const int deliberation_done =
      d.complete ? ws.cycle + d.cycles_used : std::numeric_limits<int>::max();
  const auto pending = reactive_step(ws, config, run.appraisal);

  if (pending && pending->commit_cycle < deliberation_done) {
    // The reactive layer wins the race; deliberation is cut off.
    for (const auto& e : d.decision.trace.events())
      if (e.cycle < pending->commit_cycle) trace.add(e.cycle, e.payload);
    for (const auto& a : d.decision.assessments) {
      const bool in_trace = std::any_of(trace.events().begin(), trace.events().end(), [&](const TraceEvent& e) {
        const auto* agg = std::get_if<Aggregated>(&e.payload);
        return agg && agg->assessment.option_id == a.option_id;
      });
      if (in_trace) run.decision.assessments.push_back(a);
    }
    run.decision.chosen = pending->option;
    run.reactive = pending;
    trace.add(pending->commit_cycle, Committed{pending->option, Layer::Reactive, !pending_reactive, pending->rule});
    return run;
  }

  trace.append(d.decision.trace);
  run.decision.assessments = std::move(d.decision.assessments);
  run.decision.chosen = d.decision.chosen;
  trace.add(ws.cycle + d.cycles_used, Committed{d.decision.chosen, Layer::Deliberative, true, std::nullopt});
  return run;
}

Decision agent_decide(const AgentConfig& config, const std::vector<Fact>& env_facts, const KnowledgeBase& kb,
                      const std::vector<AppraisalRule>& appraisal_rules) {
  if (config.model_kind != ModelKind::M0 && config.model_kind != ModelKind::M1)
    throw std::invalid_argument("agent_decide handles M0 and M1 only");
  return run_object_level(config, env_facts, kb, appraisal_rules).decision;
}

}  // namespace vagap
