#include <sstream>
#include <stdexcept>

#include "vagap/decision.hpp"

namespace vagap {

using nlohmann::json;

namespace {

template <class IdT>
json ids(const std::vector<IdT>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(x.str());
  return out;
}

template <class IdT>
std::vector<IdT> ids_from(const json& j) {
  std::vector<IdT> out;
  for (const auto& x : j) out.emplace_back(x.get<std::string>());
  return out;
}

template <class IdT>
json opt_id(const std::optional<IdT>& id) {
  return id ? json(id->str()) : json(nullptr);
}

template <class IdT>
std::optional<IdT> opt_id_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return IdT(j.get<std::string>());
}

Layer layer_from(const std::string& s) {
  if (s == "reactive") return Layer::Reactive;
  if (s == "deliberative") return Layer::Deliberative;
  throw std::invalid_argument("unknown layer '" + s + "'");
}

EvalStatus eval_status_from(const std::string& s) {
  if (s == "holds") return EvalStatus::Holds;
  if (s == "fails") return EvalStatus::Fails;
  if (s == "undetermined") return EvalStatus::Undetermined;
  throw std::invalid_argument("unknown evaluation status '" + s + "'");
}

AssessmentStatus assessment_status_from(const std::string& s) {
  if (s == "excluded") return AssessmentStatus::Excluded;
  if (s == "confirmed") return AssessmentStatus::Confirmed;
  if (s == "scored") return AssessmentStatus::Scored;
  throw std::invalid_argument("unknown assessment status '" + s + "'");
}

ArgumentEvaluation evaluation_from(const json& j) {
  ArgumentEvaluation ev;
  ev.argument_id = ArgumentId(j.at("argument").get<std::string>());
  ev.status = eval_status_from(j.at("status").get<std::string>());
  ev.missing = ids_from<FactId>(j.at("missing"));
  ev.contribution = Rational::from_double(j.at("contribution").get<double>());
  return ev;
}

}  // namespace

json to_json(const ArgumentEvaluation& e) {
  return {{"argument", e.argument_id.str()},
          {"status", to_string(e.status)},
          {"missing", ids(e.missing)},
          {"contribution", e.contribution.to_double()}};
}

json to_json(const OptionAssessment& a, bool with_evaluations) {
  json j = {{"option", a.option_id.str()},
            {"status", to_string(a.status)},
            {"cited", opt_id(a.cited)},
            {"net", a.net.to_double()},
            {"open_facts", ids(a.open_facts)}};
  if (with_evaluations) {
    json evs = json::array();
    for (const auto& e : a.evaluations) evs.push_back(to_json(e));
    j["evaluations"] = std::move(evs);
  }
  return j;
}

json to_json(const TraceEvent& e) {
  json j = {{"cycle", e.cycle}, {"kind", e.kind()}};
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Perceived>) {
          j["visible"] = ids(p.visible);
          j["hidden"] = ids(p.hidden);
          j["layer"] = to_string(p.layer);
        } else if constexpr (std::is_same_v<T, Retrieved>) {
          j["fact"] = p.fact.str();
          j["cost"] = p.cost;
          j["forced"] = p.forced;
        } else if constexpr (std::is_same_v<T, Evaluated>) {
          j["option"] = p.option.str();
          j.update(to_json(p.evaluation));
        } else if constexpr (std::is_same_v<T, Aggregated>) {
          j.update(to_json(p.assessment, false));
        } else if constexpr (std::is_same_v<T, Committed>) {
          j["option"] = opt_id(p.option);
          j["layer"] = to_string(p.layer);
          j["final"] = p.final;
          j["rule"] = opt_id(p.rule);
        } else {
          j["payload"] = p.payload;
        }
      },
      e.payload);
  return j;
}

TraceEvent trace_event_from_json(const json& j) {
  TraceEvent e;
  e.cycle = j.at("cycle").get<int>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "Perceived") {
    e.payload = Perceived{ids_from<FactId>(j.at("visible")), ids_from<FactId>(j.at("hidden")),
                          layer_from(j.at("layer").get<std::string>())};
  } else if (kind == "Retrieved") {
    e.payload = Retrieved{FactId(j.at("fact").get<std::string>()), j.at("cost").get<int>(),
                          j.value("forced", false)};
  } else if (kind == "Evaluated") {
    e.payload = Evaluated{OptionId(j.at("option").get<std::string>()), evaluation_from(j)};
  } else if (kind == "Aggregated") {
    OptionAssessment a;
    a.option_id = OptionId(j.at("option").get<std::string>());
    a.status = assessment_status_from(j.at("status").get<std::string>());
    a.cited = opt_id_from<ArgumentId>(j.at("cited"));
    a.net = Rational::from_double(j.at("net").get<double>());
    a.open_facts = ids_from<FactId>(j.at("open_facts"));
    e.payload = Aggregated{std::move(a)};
  } else if (kind == "Committed") {
    e.payload = Committed{opt_id_from<OptionId>(j.at("option")), layer_from(j.at("layer").get<std::string>()),
                          j.at("final").get<bool>(), opt_id_from<RuleId>(j.at("rule"))};
  } else if (kind == "MetaEvent") {
    e.payload = MetaEvent{j.at("payload")};
  } else {
    throw std::invalid_argument("unknown trace event kind '" + kind + "'");
  }
  return e;
}

std::string to_jsonl(const DecisionTrace& trace, const json& context) {
  std::string out;
  std::size_t seq = 0;
  for (const auto& e : trace.events()) {
    json line = to_json(e);
    line["seq"] = seq++;
    for (const auto& [k, v] : context.items()) line[k] = v;
    out += line.dump();
    out += '\n';
  }
  return out;
}

DecisionTrace trace_from_jsonl(const std::string& text) {
  DecisionTrace trace;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto e = trace_event_from_json(json::parse(line));
    trace.add(e.cycle, e.payload);
  }
  return trace;
}

}  // namespace vagap
