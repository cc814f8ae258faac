#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "vagap/ids.hpp"
#include "vagap/rational.hpp"

namespace vagap {

enum class Truth { True, False, Unknown };

enum class Modality { Prohibition, Obligation };

enum class OptionKind { Action, Policy, Belief };

enum class Stance { Pro, Con };

enum class Force { Weighing, Confirming, Excluding };

std::string to_string(Truth t);
std::string to_string(Modality m);
std::string to_string(OptionKind k);
std::string to_string(Stance s);
std::string to_string(Force f);

/// One validation problem, located by a JSON-pointer-like path.
struct Issue {
  std::string path;
  std::string message;

  friend bool operator==(const Issue&, const Issue&) = default;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Issue> issues);
  const std::vector<Issue>& issues() const noexcept { return issues_; }

 private:
  std::vector<Issue> issues_;
};

struct Value {
  ValueId id;
  std::string name;
  std::string description;
  bool ethical = true;

  friend bool operator==(const Value&, const Value&) = default;
};

/// A literal over a predicate name. In a norm condition the predicate is
/// resolved per option: first against the option's own attribute facts,
/// then against world facts (facts that are no option's attribute).
struct PredicateLiteral {
  std::string predicate;
  bool negated = false;

  friend bool operator==(const PredicateLiteral&, const PredicateLiteral&) = default;
};

struct Norm {
  NormId id;
  std::vector<ValueId> value_ids;
  Modality modality = Modality::Prohibition;
  std::vector<PredicateLiteral> condition;  // conjunction; empty means always
  std::string description;

  friend bool operator==(const Norm&, const Norm&) = default;
};

struct Fact {
  FactId id;
  std::string predicate;
  std::string subject;
  Truth truth = Truth::Unknown;
  double visibility = 1.0;
  int retrieval_cost = 0;

  friend bool operator==(const Fact&, const Fact&) = default;
};

struct DecisionOption {
  OptionId id;
  OptionKind kind = OptionKind::Action;
  std::string description;
  std::vector<FactId> attributes;

  friend bool operator==(const DecisionOption&, const DecisionOption&) = default;
};

struct Argument {
  ArgumentId id;
  OptionId option_id;
  Stance stance = Stance::Pro;
  Force force = Force::Weighing;
  Rational weight;  // meaningful only for weighing arguments
  std::optional<NormId> norm;  // norm_related grounds
  std::vector<FactId> facts;   // fact_related grounds (used when norm is empty)
  std::string statement;

  bool norm_related() const noexcept { return norm.has_value(); }

  friend bool operator==(const Argument&, const Argument&) = default;
};

/// What an agent currently knows: fact id -> truth. Missing ids are unknown.
class KnownFacts {
 public:
  KnownFacts() = default;
  explicit KnownFacts(std::map<FactId, Truth> truths) : truths_(std::move(truths)) {}

  static KnownFacts from_facts(const std::vector<Fact>& facts);

  Truth truth(const FactId& id) const;
  bool knows(const FactId& id) const { return truths_.contains(id); }
  void set(const FactId& id, Truth t) { truths_[id] = t; }
  const std::map<FactId, Truth>& all() const noexcept { return truths_; }

  friend bool operator==(const KnownFacts&, const KnownFacts&) = default;

 private:
  std::map<FactId, Truth> truths_;
};

/// Immutable, referentially consistent ethical knowledge. Collections are
/// kept sorted by id so every derived computation has a canonical order.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;

  /// Validates every invariant; throws ValidationError listing all issues.
  static KnowledgeBase create(std::vector<Value> values, std::vector<Norm> norms,
                              std::vector<Fact> facts, std::vector<DecisionOption> options,
                              std::vector<Argument> arguments);

  /// Same checks as create() without throwing; paths are prefixed by
  /// collection name, e.g. "/arguments/2/option".
  static std::vector<Issue> validate(const std::vector<Value>& values,
                                     const std::vector<Norm>& norms,
                                     const std::vector<Fact>& facts,
                                     const std::vector<DecisionOption>& options,
                                     const std::vector<Argument>& arguments);

  const std::vector<Value>& values() const noexcept { return values_; }
  const std::vector<Norm>& norms() const noexcept { return norms_; }
  const std::vector<Fact>& facts() const noexcept { return facts_; }
  const std::vector<DecisionOption>& options() const noexcept { return options_; }
  const std::vector<Argument>& arguments() const noexcept { return arguments_; }

  const Norm* find_norm(const NormId& id) const;
  const Fact* find_fact(const FactId& id) const;
  const DecisionOption* find_option(const OptionId& id) const;
  const Argument* find_argument(const ArgumentId& id) const;

  /// Arguments targeting an option, ascending by id.
  std::vector<const Argument*> arguments_for(const OptionId& option) const;

  /// The fact a predicate denotes in the context of an option, if any.
  std::optional<FactId> resolve(const OptionId& option, const std::string& predicate) const;

  /// Every fact a norm condition can resolve to for some option.
  std::set<FactId> condition_facts(const Norm& norm) const;

  friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;

 private:
  std::vector<Value> values_;
  std::vector<Norm> norms_;
  std::vector<Fact> facts_;
  std::vector<DecisionOption> options_;
  std::vector<Argument> arguments_;
  std::map<OptionId, std::map<std::string, FactId>> attribute_index_;
  std::map<std::string, FactId> world_index_;
};

struct NormApplication {
  enum class Status { Applies, NotApplicable, Unknown };
  Status status = Status::NotApplicable;
  std::vector<FactId> missing;  // ascending; set only when status == Unknown

  bool applies() const noexcept { return status == Status::Applies; }
  friend bool operator==(const NormApplication&, const NormApplication&) = default;
};

std::string to_string(NormApplication::Status s);

/// Kleene evaluation of a norm's condition for one option.
NormApplication norm_applies(const KnowledgeBase& kb, const Norm& norm,
                             const DecisionOption& option, const KnownFacts& known);

struct Inconsistency {
  enum class Category { NormViolatingArgumentPro, ContradictoryNormsOnOption, OrphanNorm };
  Category category;
  std::optional<OptionId> option;
  std::vector<NormId> norms;
  std::optional<ArgumentId> argument;

  friend auto operator<=>(const Inconsistency&, const Inconsistency&) = default;
};

std::string to_string(Inconsistency::Category c);

/// Checks the knowledge base against its own facts as declared. Output is
/// sorted, so it does not depend on the order collections were supplied in.
std::vector<Inconsistency> check_consistency(const KnowledgeBase& kb);

}  // namespace vagap
