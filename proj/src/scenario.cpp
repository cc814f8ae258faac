#include "vagap/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace vagap {

using nlohmann::json;

std::string to_string(AgentRole r) { return r == AgentRole::DecisionMaker ? "decision_maker" : "perspective"; }

const AgentSpec* ScenarioSpec::find_agent(const AgentId& id) const {
  for (const auto& a : agents)
    if (a.config.id == id) return &a;
  return nullptr;
}

std::filesystem::path bundled_scenario_dir() {
#ifdef VAGAP_BUNDLED_SCENARIO_DIR
  return VAGAP_BUNDLED_SCENARIO_DIR;
#else
  return "scenarios";
#endif
}

namespace {

// Field reader that records every problem instead of stopping at the first.
class Reader {
 public:
  explicit Reader(std::vector<Issue>& issues) : issues_(issues) {}

  void error(const std::string& path, const std::string& msg) { issues_.push_back({path, msg}); }

  const json* field(const json& obj, const std::string& path, const char* key, bool required = true) {
    if (!obj.is_object()) {
      error(path, "expected an object");
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
      if (required) error(path + "/" + key, "missing required field");
      return nullptr;
    }
    return &*it;
  }

  std::string str(const json& obj, const std::string& path, const char* key, bool required = true,
                  std::string fallback = {}) {
    const json* v = field(obj, path, key, required);
    if (!v) return fallback;
    if (!v->is_string()) {
      error(path + "/" + key, "expected a string");
      return fallback;
    }
    return v->get<std::string>();
  }

  double number(const json& obj, const std::string& path, const char* key, bool required, double fallback) {
    const json* v = field(obj, path, key, required);
    if (!v) return fallback;
    if (!v->is_number()) {
      error(path + "/" + key, "expected a number");
      return fallback;
    }
    return v->get<double>();
  }

  int integer(const json& obj, const std::string& path, const char* key, bool required, int fallback) {
    const json* v = field(obj, path, key, required);
    if (!v) return fallback;
    if (!v->is_number_integer()) {
      error(path + "/" + key, "expected an integer");
      return fallback;
    }
    return v->get<int>();
  }

  bool boolean(const json& obj, const std::string& path, const char* key, bool fallback) {
    const json* v = field(obj, path, key, false);
    if (!v) return fallback;
    if (!v->is_boolean()) {
      error(path + "/" + key, "expected a boolean");
      return fallback;
    }
    return v->get<bool>();
  }

  const json* array(const json& obj, const std::string& path, const char* key, bool required = false) {
    const json* v = field(obj, path, key, required);
    if (!v) return nullptr;
    if (!v->is_array()) {
      error(path + "/" + key, "expected an array");
      return nullptr;
    }
    return v;
  }

  template <class IdT>
  std::vector<IdT> id_list(const json& obj, const std::string& path, const char* key) {
    std::vector<IdT> out;
    const json* arr = array(obj, path, key);
    if (!arr) return out;
    for (std::size_t i = 0; i < arr->size(); ++i) {
      if (!(*arr)[i].is_string()) {
        error(path + "/" + key + "/" + std::to_string(i), "expected a string id");
        continue;
      }
      out.emplace_back((*arr)[i].get<std::string>());
    }
    return out;
  }

  template <class E>
  E choice(const json& obj, const std::string& path, const char* key,
           std::initializer_list<std::pair<const char*, E>> options, E fallback, bool required = true) {
    const std::string s = str(obj, path, key, required);
    if (s.empty()) return fallback;
    for (const auto& [name, value] : options)
      if (s == name) return value;
    std::string allowed;
    for (const auto& [name, value] : options) allowed += (allowed.empty() ? "" : "|") + std::string(name);
    error(path + "/" + key, "unknown value '" + s + "' (expected " + allowed + ")");
    return fallback;
  }

 private:
  std::vector<Issue>& issues_;
};

std::string idx(const std::string& base, std::size_t i) { return base + "/" + std::to_string(i); }

Truth truth_from_json(Reader& r, const json& v, const std::string& path) {
  if (v.is_boolean()) return v.get<bool>() ? Truth::True : Truth::False;
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "true") return Truth::True;
    if (s == "false") return Truth::False;
    if (s == "unknown") return Truth::Unknown;
  }
  r.error(path, "truth must be true, false or \"unknown\"");
  return Truth::Unknown;
}

json truth_to_json(Truth t) {
  if (t == Truth::Unknown) return "unknown";
  return t == Truth::True;
}

std::vector<FactLiteral> fact_literals(Reader& r, const json& obj, const std::string& path, const char* key) {
  std::vector<FactLiteral> out;
  const json* arr = r.array(obj, path, key);
  if (!arr) return out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const std::string p = idx(path + "/" + key, i);
    out.push_back({FactId(r.str((*arr)[i], p, "fact")), r.boolean((*arr)[i], p, "negated", false)});
  }
  return out;
}

json fact_literals_to_json(const std::vector<FactLiteral>& lits) {
  json out = json::array();
  for (const auto& l : lits) {
    json j = {{"fact", l.fact.str()}};
    if (l.negated) j["negated"] = true;
    out.push_back(std::move(j));
  }
  return out;
}

template <class IdT>
json ids(const std::vector<IdT>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(x.str());
  return out;
}

void check_unit(Reader& r, double v, const std::string& path, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) r.error(path, std::string(what) + " must be in [0,1]");
}

}  // namespace

LoadResult load_scenario(const json& doc) {
  LoadResult result;
  std::vector<Issue>& errors = result.errors;
  Reader r(errors);
  if (!doc.is_object()) {
    errors.push_back({"/", "scenario document must be a JSON object"});
    return result;
  }

  static const std::set<std::string> known_keys = {"name",    "description", "values", "norms",  "facts",
                                                   "options", "arguments",   "agents", "events", "config"};
  for (const auto& [key, value] : doc.items())
    if (!known_keys.contains(key)) r.error("/" + key, "unknown top-level key");

  ScenarioSpec spec;
  spec.name = r.str(doc, "", "name", false, "scenario");
  spec.description = r.str(doc, "", "description", false);

  std::vector<Value> values;
  if (const json* arr = r.array(doc, "", "values")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& v = (*arr)[i];
      const std::string p = idx("/values", i);
      values.push_back({ValueId(r.str(v, p, "id")), r.str(v, p, "name"), r.str(v, p, "description", false),
                        r.boolean(v, p, "ethical", true)});
    }
  }

  std::vector<Norm> norms;
  if (const json* arr = r.array(doc, "", "norms")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& v = (*arr)[i];
      const std::string p = idx("/norms", i);
      Norm n;
      n.id = NormId(r.str(v, p, "id"));
      n.value_ids = r.id_list<ValueId>(v, p, "values");
      n.modality = r.choice<Modality>(v, p, "modality",
                                      {{"prohibition", Modality::Prohibition}, {"obligation", Modality::Obligation}},
                                      Modality::Prohibition);
      if (const json* cond = r.array(v, p, "condition")) {
        for (std::size_t j = 0; j < cond->size(); ++j) {
          const std::string cp = idx(p + "/condition", j);
          n.condition.push_back({r.str((*cond)[j], cp, "predicate"), r.boolean((*cond)[j], cp, "negated", false)});
        }
      }
      n.description = r.str(v, p, "description", false);
      norms.push_back(std::move(n));
    }
  }

  std::vector<Fact> facts;
  if (const json* arr = r.array(doc, "", "facts")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& v = (*arr)[i];
      const std::string p = idx("/facts", i);
      Fact f;
      f.id = FactId(r.str(v, p, "id"));
      f.predicate = r.str(v, p, "predicate");
      f.subject = r.str(v, p, "subject", false);
      if (const json* t = r.field(v, p, "truth")) f.truth = truth_from_json(r, *t, p + "/truth");
      f.visibility = r.number(v, p, "visibility", false, 1.0);
      f.retrieval_cost = r.integer(v, p, "retrieval_cost", false, 0);
      facts.push_back(std::move(f));
    }
  }

  std::vector<DecisionOption> options;
  if (const json* arr = r.array(doc, "", "options")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& v = (*arr)[i];
      const std::string p = idx("/options", i);
      DecisionOption o;
      o.id = OptionId(r.str(v, p, "id"));
      o.kind = r.choice<OptionKind>(
          v, p, "kind",
          {{"action", OptionKind::Action}, {"policy", OptionKind::Policy}, {"belief", OptionKind::Belief}},
          OptionKind::Action, false);
      o.description = r.str(v, p, "description", false);
      o.attributes = r.id_list<FactId>(v, p, "attributes");
      options.push_back(std::move(o));
    }
  }

  std::vector<Argument> arguments;
  if (const json* arr = r.array(doc, "", "arguments")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& v = (*arr)[i];
      const std::string p = idx("/arguments", i);
      Argument a;
      a.id = ArgumentId(r.str(v, p, "id"));
      a.option_id = OptionId(r.str(v, p, "option"));
      a.stance = r.choice<Stance>(v, p, "stance", {{"pro", Stance::Pro}, {"con", Stance::Con}}, Stance::Pro);
      a.force = r.choice<Force>(
          v, p, "force",
          {{"weighing", Force::Weighing}, {"confirming", Force::Confirming}, {"excluding", Force::Excluding}},
          Force::Weighing);
      if (a.force == Force::Weighing) {
        const double w = r.number(v, p, "weight", true, 0.0);
        try {
          a.weight = Rational::from_double(w);
        } catch (const std::exception& e) {
          r.error(p + "/weight", e.what());
        }
      } else if (v.is_object() && v.contains("weight")) {
        r.error(p + "/weight", "only weighing arguments carry a weight");
      }
      if (const json* g = r.field(v, p, "grounds")) {
        const std::string gp = p + "/grounds";
        if (g->is_object() && g->contains("norm")) {
          a.norm = NormId(r.str(*g, gp, "norm"));
          if (g->contains("facts")) r.error(gp, "grounds must be either a norm or facts");
        } else if (g->is_object() && g->contains("facts")) {
          a.facts = r.id_list<FactId>(*g, gp, "facts");
        } else {
          r.error(gp, "grounds must be {\"norm\": id} or {\"facts\": [ids]}");
        }
      }
      a.statement = r.str(v, p, "statement", false);
      arguments.push_back(std::move(a));
    }
  }

  const json* cfg = r.field(doc, "", "config", false);
  if (cfg) {
    spec.config.forgetting_threshold =
        r.number(*cfg, "/config", "forgetting_threshold", false, kDefaultForgettingThreshold);
    check_unit(r, spec.config.forgetting_threshold, "/config/forgetting_threshold", "forgetting_threshold");
    spec.config.accept_advice = r.boolean(*cfg, "/config", "accept_advice", false);
    if (const json* arr = r.array(*cfg, "/config", "appraisal_rules")) {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        const auto& v = (*arr)[i];
        const std::string p = idx("/config/appraisal_rules", i);
        AppraisalRule rule;
        rule.id = RuleId(r.str(v, p, "id"));
        rule.pattern = fact_literals(r, v, p, "pattern");
        rule.valence = r.choice<Valence>(
            v, p, "valence",
            {{"threat", Valence::Threat}, {"opportunity", Valence::Opportunity}, {"neutral", Valence::Neutral}},
            Valence::Threat);
        rule.urgency = r.number(v, p, "urgency", true, 0.0);
        check_unit(r, rule.urgency, p + "/urgency", "urgency");
        if (rule.valence == Valence::Neutral && rule.urgency != 0.0)
          r.error(p + "/urgency", "neutral appraisal must have urgency 0");
        spec.config.appraisal_rules.push_back(std::move(rule));
      }
    }
  }

  if (const json* arr = r.array(doc, "", "agents")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& v = (*arr)[i];
      const std::string p = idx("/agents", i);
      AgentSpec a;
      a.config.id = AgentId(r.str(v, p, "id"));
      a.role = r.choice<AgentRole>(
          v, p, "role", {{"decision_maker", AgentRole::DecisionMaker}, {"perspective", AgentRole::Perspective}},
          AgentRole::DecisionMaker, false);
      a.description = r.str(v, p, "description", false);
      a.config.model_kind = r.choice<ModelKind>(
          v, p, "model", {{"M0", ModelKind::M0}, {"M1", ModelKind::M1}, {"M2", ModelKind::M2}, {"M3", ModelKind::M3}},
          ModelKind::M1, false);
      a.config.visibility_threshold = r.number(v, p, "visibility_threshold", false, 0.5);
      check_unit(r, a.config.visibility_threshold, p + "/visibility_threshold", "visibility_threshold");
      if (const json* b = r.field(v, p, "budget", false)) {
        a.config.budget.base_cycles = r.integer(*b, p + "/budget", "base_cycles", false, 20);
        a.config.budget.pressure = r.number(*b, p + "/budget", "pressure", false, 0.0);
        if (a.config.budget.base_cycles <= 0) r.error(p + "/budget/base_cycles", "base_cycles must be positive");
        check_unit(r, a.config.budget.pressure, p + "/budget/pressure", "pressure");
      }
      if (v.is_object() && v.contains("perspective")) {
        auto ps = r.id_list<FactId>(v, p, "perspective");
        a.config.perspective = std::set<FactId>(ps.begin(), ps.end());
      }
      a.config.forgetting_threshold = spec.config.forgetting_threshold;
      if (const json* rules = r.array(v, p, "reactive_rules")) {
        for (std::size_t j = 0; j < rules->size(); ++j) {
          const auto& rv = (*rules)[j];
          const std::string rp = idx(p + "/reactive_rules", j);
          ReactiveRule rule;
          rule.id = RuleId(r.str(rv, rp, "id"));
          rule.trigger = fact_literals(r, rv, rp, "trigger");
          if (rv.is_object() && rv.contains("min_urgency")) {
            rule.min_urgency = r.number(rv, rp, "min_urgency", true, 0.0);
            check_unit(r, *rule.min_urgency, rp + "/min_urgency", "min_urgency");
          }
          rule.response = OptionId(r.str(rv, rp, "option"));
          rule.latency = r.integer(rv, rp, "latency", false, 1);
          if (rule.latency < 1) r.error(rp + "/latency", "latency must be >= 1");
          a.config.reactive_rules.push_back(std::move(rule));
        }
      }
      if (const json* ticks = r.array(v, p, "decision_ticks")) {
        for (std::size_t j = 0; j < ticks->size(); ++j) {
          if (!(*ticks)[j].is_number_integer() || (*ticks)[j].get<int>() < 0)
            r.error(idx(p + "/decision_ticks", j), "decision tick must be a non-negative integer");
          else
            a.decision_ticks.push_back((*ticks)[j].get<int>());
        }
      }
      a.owned_facts = r.id_list<FactId>(v, p, "owned_facts");
      spec.agents.push_back(std::move(a));
    }
  }

  if (const json* arr = r.array(doc, "", "events")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& v = (*arr)[i];
      const std::string p = idx("/events", i);
      Event e;
      e.at_tick = r.integer(v, p, "tick", true, 0);
      if (e.at_tick < 0) r.error(p + "/tick", "tick must be >= 0");
      const std::string type = r.str(v, p, "type");
      if (type == "set_truth") {
        SetFactTruth s{FactId(r.str(v, p, "fact")), Truth::Unknown};
        if (const json* t = r.field(v, p, "value")) s.value = truth_from_json(r, *t, p + "/value");
        e.effect = s;
      } else if (type == "set_visibility") {
        SetVisibility s{FactId(r.str(v, p, "fact")), r.number(v, p, "value", true, 0.0)};
        check_unit(r, s.value, p + "/value", "visibility");
        e.effect = s;
      } else if (type == "set_pressure") {
        SetPressure s{AgentId(r.str(v, p, "agent")), r.number(v, p, "value", true, 0.0)};
        check_unit(r, s.value, p + "/value", "pressure");
        e.effect = s;
      } else if (!type.empty()) {
        r.error(p + "/type", "unknown event type '" + type + "' (expected set_truth|set_visibility|set_pressure)");
      }
      spec.events.push_back(std::move(e));
    }
  }

  // Referential checks that need the whole document.
  std::vector<Issue> kb_issues = KnowledgeBase::validate(values, norms, facts, options, arguments);
  errors.insert(errors.end(), kb_issues.begin(), kb_issues.end());

  std::set<FactId> fact_ids;
  for (const auto& f : facts) fact_ids.insert(f.id);
  std::set<OptionId> option_ids;
  for (const auto& o : options) option_ids.insert(o.id);
  auto need_fact = [&](const FactId& f, const std::string& path) {
    if (!fact_ids.contains(f)) r.error(path, "unknown fact id '" + f.str() + "'");
  };

  std::set<RuleId> appraisal_ids;
  for (std::size_t i = 0; i < spec.config.appraisal_rules.size(); ++i) {
    const auto& rule = spec.config.appraisal_rules[i];
    const std::string p = idx("/config/appraisal_rules", i);
    if (!appraisal_ids.insert(rule.id).second) r.error(p + "/id", "duplicate appraisal rule id");
    for (std::size_t j = 0; j < rule.pattern.size(); ++j) need_fact(rule.pattern[j].fact, idx(p + "/pattern", j) + "/fact");
  }

  std::set<AgentId> agent_ids;
  for (std::size_t i = 0; i < spec.agents.size(); ++i) {
    const auto& a = spec.agents[i];
    const std::string p = idx("/agents", i);
    if (a.config.id.empty()) r.error(p + "/id", "empty id");
    if (!agent_ids.insert(a.config.id).second) r.error(p + "/id", "duplicate agent id '" + a.config.id.str() + "'");
    std::set<RuleId> rule_ids;
    for (std::size_t j = 0; j < a.config.reactive_rules.size(); ++j) {
      const auto& rule = a.config.reactive_rules[j];
      const std::string rp = idx(p + "/reactive_rules", j);
      if (!rule_ids.insert(rule.id).second) r.error(rp + "/id", "duplicate reactive rule id");
      if (!option_ids.contains(rule.response)) r.error(rp + "/option", "unknown option id '" + rule.response.str() + "'");
      for (std::size_t k = 0; k < rule.trigger.size(); ++k) need_fact(rule.trigger[k].fact, idx(rp + "/trigger", k) + "/fact");
    }
    if (a.config.perspective) {
      std::size_t k = 0;
      for (const auto& f : *a.config.perspective) need_fact(f, idx(p + "/perspective", k++));
    }
    for (std::size_t k = 0; k < a.owned_facts.size(); ++k) need_fact(a.owned_facts[k], idx(p + "/owned_facts", k));
  }

  for (std::size_t i = 0; i < spec.events.size(); ++i) {
    const std::string p = idx("/events", i);
    std::visit(
        [&](const auto& eff) {
          using T = std::decay_t<decltype(eff)>;
          if constexpr (std::is_same_v<T, SetPressure>) {
            if (!agent_ids.contains(eff.agent)) r.error(p + "/agent", "unknown agent id '" + eff.agent.str() + "'");
          } else {
            need_fact(eff.fact, p + "/fact");
          }
        },
        spec.events[i].effect);
  }

  if (!errors.empty()) return result;
  spec.kb = KnowledgeBase::create(std::move(values), std::move(norms), std::move(facts), std::move(options),
                                  std::move(arguments));
  result.spec = std::move(spec);
  return result;
}

LoadResult load_scenario(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    LoadResult r;
    r.errors.push_back({"/", std::string("parse error: ") + e.what()});
    return r;
  }
  return load_scenario(doc);
}

LoadResult load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    LoadResult r;
    r.errors.push_back({"/", "cannot open scenario file '" + path.string() + "'"});
    return r;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

ScenarioSpec load_scenario_or_throw(const std::string& document) {
  LoadResult r = load_scenario(document);
  if (!r.ok()) throw ValidationError(std::move(r.errors));
  return std::move(*r.spec);
}

json scenario_to_json(const ScenarioSpec& spec) {
  json doc;
  doc["name"] = spec.name;
  if (!spec.description.empty()) doc["description"] = spec.description;

  json values = json::array();
  for (const auto& v : spec.kb.values())
    values.push_back({{"id", v.id.str()}, {"name", v.name}, {"description", v.description}, {"ethical", v.ethical}});
  doc["values"] = std::move(values);

  json norms = json::array();
  for (const auto& n : spec.kb.norms()) {
    json cond = json::array();
    for (const auto& l : n.condition) {
      json lj = {{"predicate", l.predicate}};
      if (l.negated) lj["negated"] = true;
      cond.push_back(std::move(lj));
    }
    norms.push_back({{"id", n.id.str()},
                     {"values", ids(n.value_ids)},
                     {"modality", to_string(n.modality)},
                     {"condition", std::move(cond)},
                     {"description", n.description}});
  }
  doc["norms"] = std::move(norms);

  json facts = json::array();
  for (const auto& f : spec.kb.facts())
    facts.push_back({{"id", f.id.str()},
                     {"predicate", f.predicate},
                     {"subject", f.subject},
                     {"truth", truth_to_json(f.truth)},
                     {"visibility", f.visibility},
                     {"retrieval_cost", f.retrieval_cost}});
  doc["facts"] = std::move(facts);

  json options = json::array();
  for (const auto& o : spec.kb.options())
    options.push_back({{"id", o.id.str()},
                       {"kind", to_string(o.kind)},
                       {"description", o.description},
                       {"attributes", ids(o.attributes)}});
  doc["options"] = std::move(options);

  json arguments = json::array();
  for (const auto& a : spec.kb.arguments()) {
    json j = {{"id", a.id.str()},
              {"option", a.option_id.str()},
              {"stance", to_string(a.stance)},
              {"force", to_string(a.force)},
              {"statement", a.statement}};
    if (a.force == Force::Weighing) j["weight"] = a.weight.to_double();
    j["grounds"] = a.norm ? json{{"norm", a.norm->str()}} : json{{"facts", ids(a.facts)}};
    arguments.push_back(std::move(j));
  }
  doc["arguments"] = std::move(arguments);

  json agents = json::array();
  for (const auto& a : spec.agents) {
    json rules = json::array();
    for (const auto& r : a.config.reactive_rules) {
      json rj = {{"id", r.id.str()},
                 {"trigger", fact_literals_to_json(r.trigger)},
                 {"option", r.response.str()},
                 {"latency", r.latency}};
      if (r.min_urgency) rj["min_urgency"] = *r.min_urgency;
      rules.push_back(std::move(rj));
    }
    json j = {{"id", a.config.id.str()},
              {"role", to_string(a.role)},
              {"model", to_string(a.config.model_kind)},
              {"visibility_threshold", a.config.visibility_threshold},
              {"budget", {{"base_cycles", a.config.budget.base_cycles}, {"pressure", a.config.budget.pressure}}},
              {"reactive_rules", std::move(rules)},
              {"decision_ticks", a.decision_ticks},
              {"owned_facts", ids(a.owned_facts)}};
    if (!a.description.empty()) j["description"] = a.description;
    if (a.config.perspective)
      j["perspective"] = ids(std::vector<FactId>(a.config.perspective->begin(), a.config.perspective->end()));
    agents.push_back(std::move(j));
  }
  doc["agents"] = std::move(agents);

  json events = json::array();
  for (const auto& e : spec.events) {
    json j = {{"tick", e.at_tick}};
    std::visit(
        [&](const auto& eff) {
          using T = std::decay_t<decltype(eff)>;
          if constexpr (std::is_same_v<T, SetFactTruth>) {
            j["type"] = "set_truth";
            j["fact"] = eff.fact.str();
            j["value"] = truth_to_json(eff.value);
          } else if constexpr (std::is_same_v<T, SetVisibility>) {
            j["type"] = "set_visibility";
            j["fact"] = eff.fact.str();
            j["value"] = eff.value;
          } else {
            j["type"] = "set_pressure";
            j["agent"] = eff.agent.str();
            j["value"] = eff.value;
          }
        },
        e.effect);
    events.push_back(std::move(j));
  }
  doc["events"] = std::move(events);

  json rules = json::array();
  for (const auto& r : spec.config.appraisal_rules)
    rules.push_back({{"id", r.id.str()},
                     {"pattern", fact_literals_to_json(r.pattern)},
                     {"valence", to_string(r.valence)},
                     {"urgency", r.urgency}});
  doc["config"] = {{"forgetting_threshold", spec.config.forgetting_threshold},
                   {"accept_advice", spec.config.accept_advice},
                   {"appraisal_rules", std::move(rules)}};
  return doc;
}

std::string serialize_scenario(const ScenarioSpec& spec) { return scenario_to_json(spec).dump(2) + "\n"; }

}  // namespace vagap
