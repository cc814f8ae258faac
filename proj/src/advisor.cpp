#include "vagap/advisor.hpp"

#include <algorithm>
#include <set>

namespace vagap {

using nlohmann::json;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Endorse: return "endorse";
    case Verdict::Challenge: return "challenge";
    case Verdict::Reject: return "reject";
  }
  return "endorse";
}

std::string CritiqueIssue::kind_name() const {
  static constexpr const char* names[] = {"NormViolation", "MissingDecisiveArgument", "NormSilence",
                                          "SuspectedBias"};
  return names[kind.index()];
}

std::string bias_phrase(BiasLabel b) {
  switch (b) {
    case BiasLabel::Impulsivity: return "impulsive";
    case BiasLabel::AvailabilityBias: return "driven by availability bias";
    case BiasLabel::NormForgetting: return "made while forgetting the relevant norms";
  }
  return "biased";
}

std::string question_prompt(const Fact& f) {
  std::string words = f.predicate;
  std::replace(words.begin(), words.end(), '_', ' ');
  if (f.subject.empty()) return "Is it true that " + words + "?";
  return "Is it true that " + f.subject + " " + words + "?";
}

std::vector<Issue> validate_proposal(const Proposal& p, const KnowledgeBase& kb) {
  std::vector<Issue> out;
  if (!kb.find_option(p.option_id)) out.push_back({"/option", "unknown option id '" + p.option_id.str() + "'"});
  for (std::size_t i = 0; i < p.stated_arguments.size(); ++i) {
    const std::string path = "/stated_arguments/" + std::to_string(i);
    const Argument* a = kb.find_argument(p.stated_arguments[i]);
    if (!a)
      out.push_back({path, "unknown argument id '" + p.stated_arguments[i].str() + "'"});
    else if (a->option_id != p.option_id)
      out.push_back({path, "argument '" + a->id.str() + "' does not target option '" + p.option_id.str() + "'"});
  }
  for (const auto& [fact, truth] : p.answered_facts) {
    const std::string path = "/answered_facts/" + fact.str();
    if (!kb.find_fact(fact)) out.push_back({path, "unknown fact id"});
    else if (truth == Truth::Unknown) out.push_back({path, "an answer must be true or false"});
  }
  return out;
}

std::vector<ArgumentId> decisive_arguments(const OptionAssessment& a) {
  if (a.cited) return {*a.cited};
  Rational best;
  for (const auto& e : a.evaluations)
    if (e.status == EvalStatus::Holds && best < e.contribution.abs()) best = e.contribution.abs();
  std::vector<ArgumentId> out;
  if (best.sign() == 0) return out;
  for (const auto& e : a.evaluations)
    if (e.status == EvalStatus::Holds && e.contribution.abs() == best) out.push_back(e.argument_id);
  return out;
}

namespace {

int rank_class(AssessmentStatus s) {
  switch (s) {
    case AssessmentStatus::Confirmed: return 0;
    case AssessmentStatus::Scored: return 1;
    case AssessmentStatus::Excluded: return 2;
  }
  return 1;
}

template <class IdT>
std::string join_ids(const std::vector<IdT>& xs, const std::string& sep = ", ") {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : sep) + x.str();
  return out;
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : sep) + x;
  return out;
}

std::string describe_fact(const FactId& id, const KnowledgeBase& kb) {
  const Fact* f = kb.find_fact(id);
  if (!f) return id.str();
  std::string words = f->predicate;
  std::replace(words.begin(), words.end(), '_', ' ');
  return id.str() + " (" + (f->subject.empty() ? words : f->subject + " " + words) + ")";
}

std::string describe_argument(const Argument& a) {
  std::string s = a.id.str();
  if (!a.statement.empty()) s += ": " + a.statement;
  return s;
}

std::string describe_arguments(const OptionId& option, const KnowledgeBase& kb) {
  std::vector<std::string> pro;
  std::vector<std::string> con;
  for (const Argument* a : kb.arguments_for(option)) (a->stance == Stance::Pro ? pro : con).push_back(describe_argument(*a));
  std::string s = "Arguments for " + option.str() + ": " + (pro.empty() ? "none" : join(pro, "; ")) + ".";
  s += " Arguments against " + option.str() + ": " + (con.empty() ? "none" : join(con, "; ")) + ".";
  return s;
}

/// The dialogue template, with each clause present only when its field is set.
std::string render(const Explanation& e, const KnowledgeBase& kb) {
  std::string s;
  std::vector<std::string> biases;
  for (auto b : e.detected_bias) biases.push_back(bias_phrase(b));
  if (e.initial_inclination) {
    s = "I first thought option " + e.initial_inclination->str() + " was the best choice";
    if (!biases.empty()) s += ", but I realised this decision was " + join(biases, " and ");
    s += "; ";
  } else if (!biases.empty()) {
    s = "I realised this decision was " + join(biases, " and ") + "; ";
  }
  if (!e.omitted_information.empty()) {
    std::vector<std::string> facts;
    for (const auto& f : e.omitted_information) facts.push_back(describe_fact(f, kb));
    s += "I had not considered " + join(facts, ", ") + "; ";
  }
  if (e.recommended) {
    const bool instead = e.initial_inclination && *e.initial_inclination != *e.recommended;
    s += "I propose option " + e.recommended->str() + (instead ? " instead." : ".");
  } else {
    s += "I cannot propose any option.";
  }
  if (!e.decisive_arguments.empty()) s += " Decisive arguments: " + join_ids(e.decisive_arguments) + ".";
  if (e.initial_inclination) s += " " + describe_arguments(*e.initial_inclination, kb);
  if (e.recommended && e.recommended != e.initial_inclination) s += " " + describe_arguments(*e.recommended, kb);
  return s;
}

std::string render_ranked(const RankedOption& r, const KnowledgeBase& kb) {
  const auto& a = r.assessment;
  std::string s = "Option " + a.option_id.str();
  switch (a.status) {
    case AssessmentStatus::Excluded: s += " is excluded"; break;
    case AssessmentStatus::Confirmed: s += " is confirmed"; break;
    case AssessmentStatus::Scored: s += " scores " + a.net.to_string(); break;
  }
  if (a.cited) s += " by " + a.cited->str();
  s += ".";
  if (r.explanation.recommended) s += " I recommend option " + r.explanation.recommended->str() + ".";
  if (!r.explanation.decisive_arguments.empty())
    s += " Decisive arguments: " + join_ids(r.explanation.decisive_arguments) + ".";
  s += " " + describe_arguments(a.option_id, kb);
  return s;
}

KnownFacts full_knowledge(const std::vector<Fact>& env_facts, const std::map<FactId, Truth>& answers) {
  KnownFacts known;
  for (const auto& f : env_facts)
    if (f.truth != Truth::Unknown) known.set(f.id, f.truth);
  // Answers fill gaps; they never contradict what the environment settles.
  for (const auto& [id, t] : answers)
    if (!known.knows(id) && t != Truth::Unknown) known.set(id, t);
  return known;
}

AgentConfig as_model(AgentConfig c, ModelKind k) {
  c.model_kind = k;
  return c;
}

struct SelfView {
  MetacognitiveResult run;
  std::vector<OptionAssessment> assessments;  // one per option, ascending
};

SelfView self_view(const std::vector<Fact>& env_facts, const KnowledgeBase& kb, const AdvisorContext& ctx) {
  SelfView v{metacognitive_decide(as_model(ctx.self, ModelKind::M2), env_facts, kb, ctx.appraisal_rules), {}};
  const KnownFacts known = full_knowledge(env_facts, {});
  for (const auto& o : kb.options()) {
    auto it = std::find_if(v.run.decision.assessments.begin(), v.run.decision.assessments.end(),
                           [&](const OptionAssessment& a) { return a.option_id == o.id; });
    if (it != v.run.decision.assessments.end())
      v.assessments.push_back(*it);
    else
      v.assessments.push_back(aggregate(o.id, evaluate_arguments(o, known, kb), kb));
  }
  return v;
}

std::optional<OptionId> top_of(const std::vector<RankedOption>& ranked) {
  if (ranked.empty() || ranked.front().assessment.status == AssessmentStatus::Excluded) return std::nullopt;
  return ranked.front().option_id;
}

std::vector<CritiqueIssue> violations(const DecisionOption& option, const KnownFacts& known, const KnowledgeBase& kb,
                                      std::vector<NormId>* violated = nullptr) {
  std::vector<CritiqueIssue> out;
  for (const auto& n : kb.norms()) {
    if (n.modality != Modality::Prohibition || !norm_applies(kb, n, option, known).applies()) continue;
    std::optional<ArgumentId> cited;
    for (const Argument* a : kb.arguments_for(option.id))
      if (a->norm == n.id && a->stance == Stance::Con) {
        cited = a->id;
        break;
      }
    out.push_back({NormViolation{n.id, cited}});
    if (violated) violated->push_back(n.id);
  }
  return out;
}

std::vector<Question> questions_for(const DecisionOption& option, const KnownFacts& known, const KnowledgeBase& kb) {
  std::map<FactId, NormId> blocked;
  for (const auto& n : kb.norms()) {
    const auto app = norm_applies(kb, n, option, known);
    if (app.status != NormApplication::Status::Unknown) continue;
    for (const auto& f : app.missing) blocked.emplace(f, n.id);
  }
  std::vector<Question> out;
  for (const auto& [fact, norm] : blocked) out.push_back({fact, norm, question_prompt(*kb.find_fact(fact))});
  return out;
}

std::vector<BiasLabel> labels_of(const std::vector<MetaObservation>& obs) {
  std::set<BiasLabel> labels;
  for (const auto& o : obs)
    if (auto l = bias_label_for(o)) labels.insert(*l);
  return {labels.begin(), labels.end()};
}

std::vector<FactId> ignored_of(const std::vector<MetaObservation>& obs) {
  std::set<FactId> out;
  for (const auto& o : obs)
    if (const auto* h = std::get_if<HiddenInfoIgnored>(&o.kind)) out.insert(h->facts.begin(), h->facts.end());
  return {out.begin(), out.end()};
}

void check_trace_ids(const DecisionTrace& trace, const KnowledgeBase& kb) {
  auto fact = [&](const FactId& f) {
    if (!kb.find_fact(f)) throw EnvironmentMismatch("trace refers to unknown fact '" + f.str() + "'");
  };
  auto option = [&](const OptionId& o) {
    if (!kb.find_option(o)) throw EnvironmentMismatch("trace refers to unknown option '" + o.str() + "'");
  };
  auto argument = [&](const ArgumentId& a) {
    if (!kb.find_argument(a)) throw EnvironmentMismatch("trace refers to unknown argument '" + a.str() + "'");
  };
  for (const auto& e : trace.events()) {
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Perceived>) {
            for (const auto& f : p.visible) fact(f);
            for (const auto& f : p.hidden) fact(f);
          } else if constexpr (std::is_same_v<T, Retrieved>) {
            fact(p.fact);
          } else if constexpr (std::is_same_v<T, Evaluated>) {
            option(p.option);
            argument(p.evaluation.argument_id);
            for (const auto& f : p.evaluation.missing) fact(f);
          } else if constexpr (std::is_same_v<T, Aggregated>) {
            option(p.assessment.option_id);
            if (p.assessment.cited) argument(*p.assessment.cited);
            for (const auto& f : p.assessment.open_facts) fact(f);
          } else if constexpr (std::is_same_v<T, Committed>) {
            if (p.option) option(*p.option);
          }
        },
        e.payload);
  }
}

std::optional<OptionId> committed_option(const DecisionTrace& trace) {
  if (const Committed* c = trace.final_commitment()) return c->option;
  const auto& events = trace.events();
  for (auto it = events.rbegin(); it != events.rend(); ++it)
    if (const auto* c = std::get_if<Committed>(&it->payload)) return c->option;
  return std::nullopt;
}

Verdict verdict_for(const Critique& c) {
  const bool violation = std::any_of(c.issues.begin(), c.issues.end(), [](const CritiqueIssue& i) {
    return std::holds_alternative<NormViolation>(i.kind);
  });
  if (violation) return Verdict::Reject;
  return c.issues.empty() && c.questions.empty() ? Verdict::Endorse : Verdict::Challenge;
}

}  // namespace

std::vector<RankedOption> rank(const std::vector<OptionAssessment>& assessments, const KnowledgeBase& kb) {
  std::vector<OptionAssessment> sorted = assessments;
  std::stable_sort(sorted.begin(), sorted.end(), [](const OptionAssessment& a, const OptionAssessment& b) {
    const int ca = rank_class(a.status);
    const int cb = rank_class(b.status);
    if (ca != cb) return ca < cb;
    if (a.status == AssessmentStatus::Scored && a.net != b.net) return b.net < a.net;
    return a.option_id < b.option_id;
  });
  std::vector<RankedOption> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    RankedOption r{sorted[i].option_id, sorted[i], {}};
    r.explanation.decisive_arguments = decisive_arguments(sorted[i]);
    if (i == 0 && sorted[i].status != AssessmentStatus::Excluded) r.explanation.recommended = sorted[i].option_id;
    r.explanation.rendered = render_ranked(r, kb);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RankedOption> recommend(const std::vector<Fact>& env_facts, const KnowledgeBase& kb,
                                    const AdvisorContext& ctx) {
  if (kb.options().empty()) return {};
  return rank(self_view(env_facts, kb, ctx).assessments, kb);
}

bool detect_norm_silence(const std::vector<ArgumentId>& stated_arguments, const KnowledgeBase& kb) {
  return std::none_of(stated_arguments.begin(), stated_arguments.end(), [&](const ArgumentId& id) {
    const Argument* a = kb.find_argument(id);
    return a && a->norm_related();
  });
}

Critique critique(const Proposal& proposal, const std::vector<Fact>& env_facts, const KnowledgeBase& kb,
                  const AdvisorContext& ctx) {
  if (auto problems = validate_proposal(proposal, kb); !problems.empty()) throw ValidationError(std::move(problems));
  const DecisionOption& option = *kb.find_option(proposal.option_id);
  const KnownFacts known = full_knowledge(env_facts, proposal.answered_facts);

  Critique c;
  std::vector<NormId> violated;
  c.issues = violations(option, known, kb, &violated);
  c.questions = questions_for(option, known, kb);
  const bool rejecting = !violated.empty();

  const OptionAssessment assessment = aggregate(option.id, evaluate_arguments(option, known, kb), kb);
  const std::vector<ArgumentId> decisive = decisive_arguments(assessment);
  if (!rejecting) {
    for (const auto& a : decisive)
      if (std::find(proposal.stated_arguments.begin(), proposal.stated_arguments.end(), a) ==
          proposal.stated_arguments.end())
        c.issues.push_back({MissingDecisiveArgument{a}});
  }
  if (detect_norm_silence(proposal.stated_arguments, kb)) c.issues.push_back({NormSilence{}});

  Explanation& e = c.explanation;
  e.initial_inclination = option.id;
  if (rejecting && ctx.user_model) {
    // Read the proposal as if the generic user model had produced it.
    const ObjectLevelRun user =
        run_object_level(as_model(*ctx.user_model, ModelKind::M1), env_facts, kb, ctx.appraisal_rules);
    const auto obs = monitor(user.decision.trace, derive_normative_spec(kb));
    e.detected_bias = labels_of(obs);
    for (auto b : e.detected_bias) c.issues.push_back({SuspectedBias{b}});
    std::set<FactId> in_violation;
    for (const auto& n : violated)
      for (const auto& lit : kb.find_norm(n)->condition)
        if (auto f = kb.resolve(option.id, lit.predicate)) in_violation.insert(*f);
    for (const auto& f : ignored_of(obs))
      if (in_violation.contains(f)) e.omitted_information.push_back(f);
  }

  c.verdict = verdict_for(c);
  if (c.verdict != Verdict::Endorse) {
    // Answers settle facts the environment leaves unknown.
    std::vector<Fact> informed = env_facts;
    for (auto& f : informed)
      if (auto it = proposal.answered_facts.find(f.id); it != proposal.answered_facts.end() && f.truth == Truth::Unknown)
        f.truth = it->second;
    c.recommendation = top_of(recommend(informed, kb, ctx));
  }

  if (rejecting) {
    for (const auto& i : c.issues)
      if (const auto* v = std::get_if<NormViolation>(&i.kind); v && v->argument)
        e.decisive_arguments.push_back(*v->argument);
  } else {
    e.decisive_arguments = decisive;
  }
  e.recommended = c.recommendation;
  e.rendered = render(e, kb);
  return c;
}

Critique advise(const AdviceTarget& target, const std::vector<Fact>& env_facts, const KnowledgeBase& kb,
                const AdvisorContext& ctx) {
  if (const auto* p = std::get_if<Proposal>(&target)) return critique(*p, env_facts, kb, ctx);
  const DecisionTrace& trace = std::get<DecisionTrace>(target);
  check_trace_ids(trace, kb);

  const auto observations = monitor(trace, derive_normative_spec(kb));
  const auto committed = committed_option(trace);
  const SelfView self = self_view(env_facts, kb, ctx);
  const auto& recommendation = self.run.report.final_decision;
  const KnownFacts known = full_knowledge(env_facts, {});

  Critique c;
  if (committed) {
    const DecisionOption& option = *kb.find_option(*committed);
    c.issues = violations(option, known, kb);
    c.questions = questions_for(option, known, kb);
  }
  const bool norms_mentioned = std::any_of(trace.events().begin(), trace.events().end(), [&](const TraceEvent& e) {
    const auto* ev = std::get_if<Evaluated>(&e.payload);
    return ev && kb.find_argument(ev->evaluation.argument_id)->norm_related();
  });
  if (!norms_mentioned && !kb.norms().empty()) c.issues.push_back({NormSilence{}});

  Explanation& e = c.explanation;
  e.initial_inclination = committed;
  e.detected_bias = labels_of(observations);
  for (auto b : e.detected_bias) c.issues.push_back({SuspectedBias{b}});
  e.omitted_information = ignored_of(observations);

  c.verdict = verdict_for(c);
  if (c.verdict == Verdict::Endorse && committed != recommendation) c.verdict = Verdict::Challenge;
  c.recommendation = recommendation;
  e.recommended = recommendation;
  if (recommendation) {
    for (const auto& a : self.assessments)
      if (a.option_id == *recommendation) e.decisive_arguments = decisive_arguments(a);
  }
  e.rendered = render(e, kb);
  return c;
}

// ---- serialization ------------------------------------------------------

namespace {

json opt(const std::optional<OptionId>& o) { return o ? json(o->str()) : json(nullptr); }

template <class IdT>
json ids(const std::vector<IdT>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(x.str());
  return out;
}

Truth truth_from(const json& v) {
  if (v.is_boolean()) return v.get<bool>() ? Truth::True : Truth::False;
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "true") return Truth::True;
    if (s == "false") return Truth::False;
  }
  return Truth::Unknown;
}

}  // namespace

json to_json(const Proposal& p) {
  json answers = json::object();
  for (const auto& [f, t] : p.answered_facts) answers[f.str()] = t == Truth::True;
  return {{"proposer_id", p.proposer_id},
          {"option", p.option_id.str()},
          {"stated_arguments", ids(p.stated_arguments)},
          {"answered_facts", std::move(answers)}};
}

Proposal proposal_from_json(const json& j) {
  std::vector<Issue> problems;
  Proposal p;
  if (!j.is_object()) throw ValidationError(std::vector<Issue>{{"/", "proposal must be a JSON object"}});
  if (auto it = j.find("proposer_id"); it != j.end()) {
    if (it->is_string()) p.proposer_id = it->get<std::string>();
    else problems.push_back({"/proposer_id", "expected a string"});
  }
  if (auto it = j.find("option"); it != j.end() && it->is_string())
    p.option_id = OptionId(it->get<std::string>());
  else
    problems.push_back({"/option", "missing or non-string option id"});
  if (auto it = j.find("stated_arguments"); it != j.end()) {
    if (!it->is_array()) {
      problems.push_back({"/stated_arguments", "expected an array"});
    } else {
      for (std::size_t i = 0; i < it->size(); ++i) {
        if ((*it)[i].is_string()) p.stated_arguments.emplace_back((*it)[i].get<std::string>());
        else problems.push_back({"/stated_arguments/" + std::to_string(i), "expected a string id"});
      }
    }
  }
  if (auto it = j.find("answered_facts"); it != j.end()) {
    if (!it->is_object()) {
      problems.push_back({"/answered_facts", "expected an object"});
    } else {
      for (const auto& [k, v] : it->items()) {
        const Truth t = truth_from(v);
        if (t == Truth::Unknown) problems.push_back({"/answered_facts/" + k, "an answer must be true or false"});
        else p.answered_facts[FactId(k)] = t;
      }
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return p;
}

json to_json(const CritiqueIssue& i) {
  json j = {{"kind", i.kind_name()}};
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, NormViolation>) {
          j["norm"] = k.norm.str();
          j["argument"] = k.argument ? json(k.argument->str()) : json(nullptr);
        } else if constexpr (std::is_same_v<T, MissingDecisiveArgument>) {
          j["argument"] = k.argument.str();
        } else if constexpr (std::is_same_v<T, SuspectedBias>) {
          j["bias"] = to_string(k.bias);
        }
      },
      i.kind);
  return j;
}

json to_json(const Explanation& e) {
  json bias = json::array();
  for (auto b : e.detected_bias) bias.push_back(to_string(b));
  return {{"initial_inclination", opt(e.initial_inclination)},
          {"detected_bias", std::move(bias)},
          {"omitted_information", ids(e.omitted_information)},
          {"decisive_arguments", ids(e.decisive_arguments)},
          {"recommended", opt(e.recommended)},
          {"rendered", e.rendered}};
}

json to_json(const Question& q) {
  return {{"fact", q.fact_id.str()}, {"norm", q.norm_id.str()}, {"prompt", q.prompt}};
}

json to_json(const Critique& c) {
  json issues = json::array();
  for (const auto& i : c.issues) issues.push_back(to_json(i));
  json questions = json::array();
  for (const auto& q : c.questions) questions.push_back(to_json(q));
  return {{"verdict", to_string(c.verdict)},
          {"issues", std::move(issues)},
          {"recommendation", opt(c.recommendation)},
          {"explanation", to_json(c.explanation)},
          {"questions", std::move(questions)}};
}

json to_json(const RankedOption& r) {
  return {{"option", r.option_id.str()},
          {"assessment", to_json(r.assessment)},
          {"explanation", to_json(r.explanation)}};
}

}  // namespace vagap
