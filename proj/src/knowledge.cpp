#include "vagap/knowledge.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace vagap {

std::string to_string(Truth t) {
  switch (t) {
    case Truth::True: return "true";
    case Truth::False: return "false";
    case Truth::Unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(Modality m) {
  return m == Modality::Prohibition ? "prohibition" : "obligation";
}

std::string to_string(OptionKind k) {
  switch (k) {
    case OptionKind::Action: return "action";
    case OptionKind::Policy: return "policy";
    case OptionKind::Belief: return "belief";
  }
  return "action";
}

std::string to_string(Stance s) { return s == Stance::Pro ? "pro" : "con"; }

std::string to_string(Force f) {
  switch (f) {
    case Force::Weighing: return "weighing";
    case Force::Confirming: return "confirming";
    case Force::Excluding: return "excluding";
  }
  return "weighing";
}

std::string to_string(NormApplication::Status s) {
  switch (s) {
    case NormApplication::Status::Applies: return "applies";
    case NormApplication::Status::NotApplicable: return "not_applicable";
    case NormApplication::Status::Unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(Inconsistency::Category c) {
  switch (c) {
    case Inconsistency::Category::NormViolatingArgumentPro: return "NormViolatingArgumentPro";
    case Inconsistency::Category::ContradictoryNormsOnOption: return "ContradictoryNormsOnOption";
    case Inconsistency::Category::OrphanNorm: return "OrphanNorm";
  }
  return "OrphanNorm";
}

namespace {

std::string describe(const std::vector<Issue>& issues) {
  std::ostringstream os;
  os << issues.size() << " validation error(s)";
  for (const auto& i : issues) os << "\n  " << i.path << ": " << i.message;
  return os.str();
}

template <class T>
void sort_by_id(std::vector<T>& xs) {
  std::stable_sort(xs.begin(), xs.end(), [](const T& a, const T& b) { return a.id < b.id; });
}

template <class T, class IdT>
const T* find_sorted(const std::vector<T>& xs, const IdT& id) {
  auto it = std::lower_bound(xs.begin(), xs.end(), id,
                             [](const T& x, const IdT& key) { return x.id < key; });
  return (it != xs.end() && it->id == id) ? &*it : nullptr;
}

std::string at(const char* collection, std::size_t index, const char* field = nullptr) {
  std::string p = std::string("/") + collection + "/" + std::to_string(index);
  if (field) p += std::string("/") + field;
  return p;
}

}  // namespace

ValidationError::ValidationError(std::vector<Issue> issues)
    : std::runtime_error(describe(issues)), issues_(std::move(issues)) {}

KnownFacts KnownFacts::from_facts(const std::vector<Fact>& facts) {
  std::map<FactId, Truth> m;
  for (const auto& f : facts) m[f.id] = f.truth;
  return KnownFacts(std::move(m));
}

Truth KnownFacts::truth(const FactId& id) const {
  auto it = truths_.find(id);
  return it == truths_.end() ? Truth::Unknown : it->second;
}

std::vector<Issue> KnowledgeBase::validate(const std::vector<Value>& values,
                                           const std::vector<Norm>& norms,
                                           const std::vector<Fact>& facts,
                                           const std::vector<DecisionOption>& options,
                                           const std::vector<Argument>& arguments) {
  std::vector<Issue> issues;
  auto add = [&](std::string path, std::string msg) { issues.push_back({std::move(path), std::move(msg)}); };

  std::set<ValueId> value_ids;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& v = values[i];
    if (v.id.empty()) add(at("values", i, "id"), "empty id");
    if (!value_ids.insert(v.id).second) add(at("values", i, "id"), "duplicate value id '" + v.id.str() + "'");
    if (v.name.empty()) add(at("values", i, "name"), "name must be non-empty");
  }

  std::set<FactId> fact_ids;
  std::set<std::string> predicates;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    const auto& f = facts[i];
    if (f.id.empty()) add(at("facts", i, "id"), "empty id");
    if (!fact_ids.insert(f.id).second) add(at("facts", i, "id"), "duplicate fact id '" + f.id.str() + "'");
    if (f.predicate.empty()) add(at("facts", i, "predicate"), "predicate must be non-empty");
    if (!(f.visibility >= 0.0 && f.visibility <= 1.0))
      add(at("facts", i, "visibility"), "visibility must be in [0,1]");
    if (f.retrieval_cost < 0) add(at("facts", i, "retrieval_cost"), "retrieval_cost must be >= 0");
    predicates.insert(f.predicate);
  }

  std::set<OptionId> option_ids;
  std::set<FactId> attribute_facts;
  for (std::size_t i = 0; i < options.size(); ++i) {
    const auto& o = options[i];
    if (o.id.empty()) add(at("options", i, "id"), "empty id");
    if (!option_ids.insert(o.id).second) add(at("options", i, "id"), "duplicate option id '" + o.id.str() + "'");
    std::set<std::string> seen_predicates;
    for (std::size_t j = 0; j < o.attributes.size(); ++j) {
      const auto& fid = o.attributes[j];
      const std::string path = at("options", i, "attributes") + "/" + std::to_string(j);
      if (!fact_ids.contains(fid)) {
        add(path, "unknown fact id '" + fid.str() + "'");
        continue;
      }
      attribute_facts.insert(fid);
      auto fit = std::find_if(facts.begin(), facts.end(), [&](const Fact& f) { return f.id == fid; });
      if (!seen_predicates.insert(fit->predicate).second)
        add(path, "option has two attributes with predicate '" + fit->predicate + "'");
    }
  }

  std::map<std::string, int> world_predicate_count;
  for (const auto& f : facts)
    if (!attribute_facts.contains(f.id)) ++world_predicate_count[f.predicate];

  std::set<NormId> norm_ids;
  std::map<NormId, Modality> modality_of;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const auto& n = norms[i];
    if (n.id.empty()) add(at("norms", i, "id"), "empty id");
    if (!norm_ids.insert(n.id).second) add(at("norms", i, "id"), "duplicate norm id '" + n.id.str() + "'");
    modality_of[n.id] = n.modality;
    if (n.value_ids.empty()) add(at("norms", i, "values"), "norm must interpret at least one value");
    for (std::size_t j = 0; j < n.value_ids.size(); ++j)
      if (!value_ids.contains(n.value_ids[j]))
        add(at("norms", i, "values") + "/" + std::to_string(j), "unknown value id '" + n.value_ids[j].str() + "'");
    for (std::size_t j = 0; j < n.condition.size(); ++j) {
      const auto& lit = n.condition[j];
      const std::string path = at("norms", i, "condition") + "/" + std::to_string(j);
      if (!predicates.contains(lit.predicate))
        add(path, "undeclared predicate '" + lit.predicate + "'");
      else if (world_predicate_count[lit.predicate] > 1)
        add(path, "predicate '" + lit.predicate + "' is ambiguous: several world facts declare it");
    }
  }

  std::set<ArgumentId> argument_ids;
  for (std::size_t i = 0; i < arguments.size(); ++i) {
    const auto& a = arguments[i];
    if (a.id.empty()) add(at("arguments", i, "id"), "empty id");
    if (!argument_ids.insert(a.id).second)
      add(at("arguments", i, "id"), "duplicate argument id '" + a.id.str() + "'");
    if (!option_ids.contains(a.option_id))
      add(at("arguments", i, "option"), "unknown option id '" + a.option_id.str() + "'");
    switch (a.force) {
      case Force::Weighing:
        if (a.stance == Stance::Pro && a.weight.sign() <= 0)
          add(at("arguments", i, "weight"), "pro weighing argument needs weight > 0");
        if (a.stance == Stance::Con && a.weight.sign() >= 0)
          add(at("arguments", i, "weight"), "con weighing argument needs weight < 0");
        break;
      case Force::Excluding:
        if (a.stance != Stance::Con) add(at("arguments", i, "stance"), "excluding argument must be con");
        break;
      case Force::Confirming:
        if (a.stance != Stance::Pro) add(at("arguments", i, "stance"), "confirming argument must be pro");
        break;
    }
    if (a.norm) {
      if (!a.facts.empty()) add(at("arguments", i, "grounds"), "grounds must be either a norm or facts");
      auto mit = modality_of.find(*a.norm);
      if (mit == modality_of.end()) {
        add(at("arguments", i, "grounds") + "/norm", "unknown norm id '" + a.norm->str() + "'");
      } else if (a.stance == Stance::Con && mit->second != Modality::Prohibition) {
        add(at("arguments", i, "grounds") + "/norm", "con norm argument must cite a prohibition");
      } else if (a.stance == Stance::Pro && mit->second != Modality::Obligation) {
        add(at("arguments", i, "grounds") + "/norm", "pro norm argument must cite an obligation");
      }
    } else {
      if (a.facts.empty()) add(at("arguments", i, "grounds"), "fact grounds must list at least one fact");
      for (std::size_t j = 0; j < a.facts.size(); ++j)
        if (!fact_ids.contains(a.facts[j]))
          add(at("arguments", i, "grounds") + "/facts/" + std::to_string(j),
              "unknown fact id '" + a.facts[j].str() + "'");
    }
  }
  return issues;
}

KnowledgeBase KnowledgeBase::create(std::vector<Value> values, std::vector<Norm> norms,
                                    std::vector<Fact> facts, std::vector<DecisionOption> options,
                                    std::vector<Argument> arguments) {
  if (auto issues = validate(values, norms, facts, options, arguments); !issues.empty())
    throw ValidationError(std::move(issues));

  KnowledgeBase kb;
  sort_by_id(values);
  sort_by_id(norms);
  sort_by_id(facts);
  sort_by_id(options);
  sort_by_id(arguments);
  kb.values_ = std::move(values);
  kb.norms_ = std::move(norms);
  kb.facts_ = std::move(facts);
  kb.options_ = std::move(options);
  kb.arguments_ = std::move(arguments);

  std::set<FactId> attribute_facts;
  for (const auto& o : kb.options_) {
    auto& idx = kb.attribute_index_[o.id];
    for (const auto& fid : o.attributes) {
      idx.emplace(kb.find_fact(fid)->predicate, fid);
      attribute_facts.insert(fid);
    }
  }
  for (const auto& f : kb.facts_)
    if (!attribute_facts.contains(f.id)) kb.world_index_.emplace(f.predicate, f.id);
  return kb;
}

const Norm* KnowledgeBase::find_norm(const NormId& id) const { return find_sorted(norms_, id); }
const Fact* KnowledgeBase::find_fact(const FactId& id) const { return find_sorted(facts_, id); }
const DecisionOption* KnowledgeBase::find_option(const OptionId& id) const { return find_sorted(options_, id); }
const Argument* KnowledgeBase::find_argument(const ArgumentId& id) const { return find_sorted(arguments_, id); }

std::vector<const Argument*> KnowledgeBase::arguments_for(const OptionId& option) const {
  std::vector<const Argument*> out;
  for (const auto& a : arguments_)
    if (a.option_id == option) out.push_back(&a);
  return out;
}

std::optional<FactId> KnowledgeBase::resolve(const OptionId& option, const std::string& predicate) const {
  if (auto oit = attribute_index_.find(option); oit != attribute_index_.end()) {
    if (auto pit = oit->second.find(predicate); pit != oit->second.end()) return pit->second;
  }
  if (auto wit = world_index_.find(predicate); wit != world_index_.end()) return wit->second;
  return std::nullopt;
}

std::set<FactId> KnowledgeBase::condition_facts(const Norm& norm) const {
  std::set<FactId> out;
  for (const auto& lit : norm.condition) {
    if (auto wit = world_index_.find(lit.predicate); wit != world_index_.end()) out.insert(wit->second);
    for (const auto& [option, idx] : attribute_index_)
      if (auto pit = idx.find(lit.predicate); pit != idx.end()) out.insert(pit->second);
  }
  return out;
}

NormApplication norm_applies(const KnowledgeBase& kb, const Norm& norm, const DecisionOption& option,
                             const KnownFacts& known) {
  bool any_false = false;
  std::set<FactId> missing;
  for (const auto& lit : norm.condition) {
    auto fid = kb.resolve(option.id, lit.predicate);
    // A predicate the option does not carry and the world does not state is
    // structurally absent, hence false.
    const Truth t = fid ? known.truth(*fid) : Truth::False;
    if (t == Truth::Unknown) {
      missing.insert(*fid);
      continue;
    }
    const bool holds = (t == Truth::True) != lit.negated;
    if (!holds) any_false = true;
  }
  NormApplication out;
  if (any_false) {
    out.status = NormApplication::Status::NotApplicable;
  } else if (!missing.empty()) {
    out.status = NormApplication::Status::Unknown;
    out.missing.assign(missing.begin(), missing.end());
  } else {
    out.status = NormApplication::Status::Applies;
  }
  return out;
}

std::vector<Inconsistency> check_consistency(const KnowledgeBase& kb) {
  using Cat = Inconsistency::Category;
  std::vector<Inconsistency> out;
  const KnownFacts known = KnownFacts::from_facts(kb.facts());

  for (const auto& option : kb.options()) {
    std::vector<NormId> prohibitions;
    std::vector<NormId> obligations;
    for (const auto& norm : kb.norms()) {
      if (!norm_applies(kb, norm, option, known).applies()) continue;
      (norm.modality == Modality::Prohibition ? prohibitions : obligations).push_back(norm.id);
    }
    for (const auto& p : prohibitions) {
      for (const Argument* a : kb.arguments_for(option.id)) {
        // A confirming argument claims the option is settled in its favour,
        // which cannot coexist with a prohibition that excludes it.
        if (a->stance == Stance::Pro && a->force == Force::Confirming)
          out.push_back({Cat::NormViolatingArgumentPro, option.id, {p}, a->id});
      }
      for (const auto& o : obligations) out.push_back({Cat::ContradictoryNormsOnOption, option.id, {p, o}, std::nullopt});
    }
  }

  std::set<NormId> cited;
  for (const auto& a : kb.arguments())
    if (a.norm) cited.insert(*a.norm);
  for (const auto& norm : kb.norms())
    if (!cited.contains(norm.id)) out.push_back({Cat::OrphanNorm, std::nullopt, {norm.id}, std::nullopt});

  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace vagap
