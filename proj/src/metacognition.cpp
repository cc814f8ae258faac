#include "vagap/metacognition.hpp"

#include <algorithm>

namespace vagap {

using nlohmann::json;

std::string to_string(BiasLabel b) {
  switch (b) {
    case BiasLabel::AvailabilityBias: return "availability_bias";
    case BiasLabel::Impulsivity: return "impulsivity";
    case BiasLabel::NormForgetting: return "norm_forgetting";
  }
  return "availability_bias";
}

std::optional<BiasLabel> bias_label_from(const std::string& s) {
  if (s == "availability_bias") return BiasLabel::AvailabilityBias;
  if (s == "impulsivity") return BiasLabel::Impulsivity;
  if (s == "norm_forgetting") return BiasLabel::NormForgetting;
  return std::nullopt;
}

std::string MetaObservation::kind_name() const {
  static constexpr const char* names[] = {"ImpulsiveCommitment", "NormArgumentsAbsent", "HiddenInfoIgnored",
                                          "NormativeDeviation"};
  return names[kind.index()];
}

std::string ControlAction::kind_name() const {
  static constexpr const char* names[] = {"VetoCommitment", "ExtendBudget", "ForceRetrieval", "RerunDeliberation"};
  return names[kind.index()];
}

std::optional<BiasLabel> bias_label_for(const MetaObservation& o) {
  if (std::holds_alternative<ImpulsiveCommitment>(o.kind)) return BiasLabel::Impulsivity;
  if (std::holds_alternative<HiddenInfoIgnored>(o.kind)) return BiasLabel::AvailabilityBias;
  if (std::holds_alternative<NormArgumentsAbsent>(o.kind)) return BiasLabel::NormForgetting;
  return std::nullopt;
}

NormativeSpec derive_normative_spec(const KnowledgeBase& kb) {
  NormativeSpec spec;
  for (const auto& o : kb.options()) {
    spec.options.push_back(o.id);
    std::vector<ArgumentId> checks;
    for (const Argument* a : kb.arguments_for(o.id))
      if (a->norm_related()) checks.push_back(a->id);
    if (!checks.empty()) spec.required_checks[o.id] = std::move(checks);
  }
  for (const auto& n : kb.norms()) {
    auto facts = kb.condition_facts(n);
    spec.required_facts.insert(facts.begin(), facts.end());
  }
  for (const auto& a : kb.arguments())
    spec.required_facts.insert(a.facts.begin(), a.facts.end());
  return spec;
}

namespace {

bool is_rerun_marker(const TraceEvent& e) {
  const auto* m = std::get_if<MetaEvent>(&e.payload);
  return m && m->payload.value("type", "") == "action" && m->payload.value("action", "") == "RerunDeliberation";
}

}  // namespace

std::vector<MetaObservation> monitor(const DecisionTrace& trace, const NormativeSpec& spec) {
  const auto& events = trace.events();
  std::size_t begin = 0;
  for (std::size_t i = 0; i < events.size(); ++i)
    if (is_rerun_marker(events[i])) begin = i + 1;

  std::set<FactId> hidden;
  std::set<FactId> known;
  std::set<ArgumentId> evaluated;
  std::map<OptionId, std::size_t> aggregated;
  std::optional<std::size_t> perceived_at;
  std::optional<std::size_t> commit_at;
  std::vector<std::size_t> reactive_commits;

  for (std::size_t i = begin; i < events.size(); ++i) {
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Perceived>) {
            if (!perceived_at) perceived_at = i;
            known.insert(p.visible.begin(), p.visible.end());
            hidden.insert(p.hidden.begin(), p.hidden.end());
          } else if constexpr (std::is_same_v<T, Retrieved>) {
            known.insert(p.fact);
          } else if constexpr (std::is_same_v<T, Evaluated>) {
            evaluated.insert(p.evaluation.argument_id);
          } else if constexpr (std::is_same_v<T, Aggregated>) {
            aggregated.emplace(p.assessment.option_id, i);
          } else if constexpr (std::is_same_v<T, Committed>) {
            commit_at = i;
            if (p.layer == Layer::Reactive) reactive_commits.push_back(i);
          }
        },
        events[i].payload);
  }

  const int now = trace.last_cycle();
  std::vector<MetaObservation> out;

  for (std::size_t idx : reactive_commits) {
    const auto& c = std::get<Committed>(events[idx].payload);
    out.push_back({ImpulsiveCommitment{c.rule, c.option.value_or(OptionId{})}, now, {idx}});
  }

  for (const auto& [option, checks] : spec.required_checks) {
    std::vector<ArgumentId> missing;
    for (const auto& a : checks)
      if (!evaluated.contains(a)) missing.push_back(a);
    if (missing.empty()) continue;
    std::vector<std::size_t> evidence;
    if (auto it = aggregated.find(option); it != aggregated.end()) evidence.push_back(it->second);
    else if (commit_at) evidence.push_back(*commit_at);
    out.push_back({NormArgumentsAbsent{option, std::move(missing)}, now, std::move(evidence)});
  }

  std::vector<FactId> ignored;
  for (const auto& f : spec.required_facts)
    if (hidden.contains(f) && !known.contains(f)) ignored.push_back(f);
  if (!ignored.empty()) out.push_back({HiddenInfoIgnored{std::move(ignored)}, now, {*perceived_at}});

  if (commit_at && std::get<Committed>(events[*commit_at].payload).layer == Layer::Deliberative &&
      spec.no_commit_before_aggregation) {
    std::vector<OptionId> unaggregated;
    for (const auto& o : spec.options)
      if (!aggregated.contains(o)) unaggregated.push_back(o);
    if (!unaggregated.empty()) {
      out.push_back({NormativeDeviation{"committed before every option was aggregated", std::move(unaggregated)},
                     now,
                     {*commit_at}});
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const MetaObservation& a, const MetaObservation& b) {
    if (a.kind.index() != b.kind.index()) return a.kind.index() < b.kind.index();
    auto key = [](const MetaObservation& o) -> std::string {
      if (auto* x = std::get_if<ImpulsiveCommitment>(&o.kind)) return x->option.str();
      if (auto* x = std::get_if<NormArgumentsAbsent>(&o.kind)) return x->option.str();
      return {};
    };
    return key(a) < key(b);
  });
  return out;
}

std::vector<ControlAction> control(const std::vector<MetaObservation>& observations, const KnowledgeBase& kb) {
  std::vector<OptionId> vetoes;
  std::set<FactId> forced;
  int extra = 0;
  bool rerun = false;
  bool suppress = false;

  for (const auto& o : observations) {
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, ImpulsiveCommitment>) {
            if (std::find(vetoes.begin(), vetoes.end(), k.option) == vetoes.end()) vetoes.push_back(k.option);
            rerun = true;
          } else if constexpr (std::is_same_v<T, HiddenInfoIgnored>) {
            for (const auto& f : k.facts) {
              if (!forced.insert(f).second) continue;
              if (const Fact* fact = kb.find_fact(f)) extra += fact->retrieval_cost;
            }
          } else if constexpr (std::is_same_v<T, NormArgumentsAbsent>) {
            rerun = true;
            suppress = true;
          } else {
            extra += static_cast<int>(k.unaggregated.size());
            rerun = true;
          }
        },
        o.kind);
  }

  std::vector<ControlAction> out;
  for (auto& v : vetoes) out.push_back({VetoCommitment{std::move(v)}});
  if (!forced.empty()) out.push_back({ForceRetrieval{{forced.begin(), forced.end()}}});
  if (extra > 0) out.push_back({ExtendBudget{extra}});
  if (rerun) out.push_back({RerunDeliberation{suppress}});
  return out;
}

std::vector<FactId> IntrospectionReport::omitted_facts() const {
  std::set<FactId> out;
  for (const auto& o : observations)
    if (const auto* h = std::get_if<HiddenInfoIgnored>(&o.kind)) out.insert(h->facts.begin(), h->facts.end());
  return {out.begin(), out.end()};
}

namespace {

/// The same trace with its final commitment recorded as pending.
DecisionTrace without_final_commitment(const DecisionTrace& t) {
  DecisionTrace out;
  for (const auto& e : t.events()) {
    TracePayload p = e.payload;
    if (auto* c = std::get_if<Committed>(&p)) c->final = false;
    out.add(e.cycle, std::move(p));
  }
  return out;
}

}  // namespace

MetacognitiveResult metacognitive_decide(const AgentConfig& config, const std::vector<Fact>& env_facts,
                                         const KnowledgeBase& kb,
                                         const std::vector<AppraisalRule>& appraisal_rules) {
  // Meta-level processing is free; only the object-level rerun spends cycles.
  constexpr int kMaxRounds = 8;

  MetacognitiveResult result;
  result.object_level = run_object_level(config, env_facts, kb, appraisal_rules, /*pending_reactive=*/true);
  const ObjectLevelRun& first = result.object_level;
  const NormativeSpec spec = derive_normative_spec(kb);

  DecisionTrace trace = first.decision.trace;
  Decision current = first.decision;
  IntrospectionReport& report = result.report;
  report.initial_decision = first.decision.chosen;

  std::vector<FactId> forced;
  int extra = 0;
  bool suppress_forgetting = false;
  bool settled = false;

  std::vector<MetaObservation> observations = monitor(trace, spec);
  if (!observations.empty()) trace = without_final_commitment(trace);
  std::string stage = first.reactive ? "pre_commit" : "post_deliberation";

  for (int round = 0; round < kMaxRounds && !observations.empty(); ++round) {
    const int now = trace.last_cycle();
    trace.add(now, MetaEvent{{{"type", "checkpoint"}, {"stage", stage}, {"round", round}}});
    for (const auto& o : observations) {
      trace.add(now, MetaEvent{{{"type", "observation"}, {"observation", to_json(o)}}});
      report.observations.push_back(o);
    }
    const auto actions = control(observations, kb);
    for (const auto& a : actions) {
      std::visit(
          [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ForceRetrieval>) {
              for (const auto& f : k.facts)
                if (std::find(forced.begin(), forced.end(), f) == forced.end()) forced.push_back(f);
            } else if constexpr (std::is_same_v<T, ExtendBudget>) {
              extra += k.extra_cycles;
            } else if constexpr (std::is_same_v<T, RerunDeliberation>) {
              suppress_forgetting = suppress_forgetting || k.suppress_forgetting;
            }
          },
          a.kind);
      json payload = to_json(a);
      payload["type"] = "action";
      payload["action"] = a.kind_name();
      if (std::holds_alternative<RerunDeliberation>(a.kind)) continue;  // emitted last, below
      trace.add(now, MetaEvent{std::move(payload)});
      report.actions.push_back(a);
    }
    // Every intervention ends in a rerun; the marker delimits the new attempt.
    const ControlAction rerun{RerunDeliberation{suppress_forgetting}};
    json marker = to_json(rerun);
    marker["type"] = "action";
    marker["action"] = rerun.kind_name();
    trace.add(now, MetaEvent{std::move(marker)});
    report.actions.push_back(rerun);

    Workspace ws = first.workspace;
    ws.cycle = now;
    DecisionTrace attempt;
    attempt.add(ws.cycle, Perceived{ws.visible_ids, ws.hidden_fact_ids(), Layer::Deliberative});
    DeliberationResult d = deliberate(ws, kb, first.effective_budget + extra,
                                      {forced, first.forgetting && !suppress_forgetting});
    attempt.append(d.decision.trace);
    const int done = ws.cycle + d.cycles_used;

    DecisionTrace candidate = trace;
    candidate.append(attempt);
    candidate.add(done, Committed{d.decision.chosen, Layer::Deliberative, true, std::nullopt});
    observations = monitor(candidate, spec);
    current = d.decision;
    stage = "post_deliberation";
    if (observations.empty()) {
      trace = std::move(candidate);
      settled = true;
    } else {
      trace.append(attempt);
      trace.add(done, Committed{d.decision.chosen, Layer::Deliberative, false, std::nullopt});
    }
  }
  if (!settled && !trace.final_commitment())
    trace.add(trace.last_cycle(), Committed{current.chosen, Layer::Deliberative, true, std::nullopt});

  std::set<BiasLabel> labels;
  for (const auto& o : report.observations)
    if (auto l = bias_label_for(o)) labels.insert(*l);
  report.bias_labels.assign(labels.begin(), labels.end());
  report.final_decision = current.chosen;

  result.decision.chosen = current.chosen;
  result.decision.assessments = current.assessments;
  result.decision.trace = std::move(trace);
  return result;
}

namespace {

template <class IdT>
json ids(const std::vector<IdT>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(x.str());
  return out;
}

json opt(const std::optional<OptionId>& o) { return o ? json(o->str()) : json(nullptr); }

}  // namespace

json to_json(const MetaObservation& o) {
  json j = {{"kind", o.kind_name()}, {"cycle", o.cycle}, {"evidence", o.evidence}};
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ImpulsiveCommitment>) {
          j["rule"] = k.rule ? json(k.rule->str()) : json(nullptr);
          j["option"] = k.option.str();
        } else if constexpr (std::is_same_v<T, NormArgumentsAbsent>) {
          j["option"] = k.option.str();
          j["missing"] = ids(k.missing);
        } else if constexpr (std::is_same_v<T, HiddenInfoIgnored>) {
          j["facts"] = ids(k.facts);
        } else {
          j["description"] = k.description;
          j["unaggregated"] = ids(k.unaggregated);
        }
      },
      o.kind);
  if (auto l = bias_label_for(o)) j["bias"] = to_string(*l);
  return j;
}

json to_json(const ControlAction& a) {
  json j = {{"kind", a.kind_name()}};
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, VetoCommitment>) {
          j["option"] = k.option.str();
        } else if constexpr (std::is_same_v<T, ExtendBudget>) {
          j["extra_cycles"] = k.extra_cycles;
        } else if constexpr (std::is_same_v<T, ForceRetrieval>) {
          j["facts"] = ids(k.facts);
        } else {
          j["suppress_forgetting"] = k.suppress_forgetting;
        }
      },
      a.kind);
  return j;
}

json to_json(const IntrospectionReport& r) {
  json obs = json::array();
  for (const auto& o : r.observations) obs.push_back(to_json(o));
  json acts = json::array();
  for (const auto& a : r.actions) acts.push_back(to_json(a));
  json labels = json::array();
  for (auto l : r.bias_labels) labels.push_back(to_string(l));
  return {{"observations", std::move(obs)},
          {"actions", std::move(acts)},
          {"initial_decision", opt(r.initial_decision)},
          {"final_decision", opt(r.final_decision)},
          {"bias_labels", std::move(labels)}};
}

json to_json(const NormativeSpec& s) {
  json checks = json::object();
  for (const auto& [o, args] : s.required_checks) checks[o.str()] = ids(args);
  return {{"required_checks", std::move(checks)},
          {"required_facts", ids(std::vector<FactId>(s.required_facts.begin(), s.required_facts.end()))},
          {"no_commit_before_aggregation", s.no_commit_before_aggregation}};
}

}  // namespace vagap
