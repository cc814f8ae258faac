#include <doctest.h>

#include <algorithm>

#include "support/generators.hpp"
#include "support/oracle.hpp"
#include "vagap/knowledge.hpp"

using namespace vagap;

namespace {

const std::vector<Value> kValues = {{ValueId("v_care"), "care", "", true}};

Fact fact(const std::string& id, const std::string& pred, Truth t) { return {FactId(id), pred, "it", t, 1.0, 0}; }

bool has_issue(const std::vector<Issue>& issues, const std::string& path) {
  return std::any_of(issues.begin(), issues.end(), [&](const Issue& i) { return i.path == path; });
}

}  // namespace

TEST_SUITE("knowledge") {

TEST_CASE("empty knowledge base is consistent") { CHECK(check_consistency(KnowledgeBase{}).empty()); }

TEST_CASE("pro confirming argument on a prohibited option is flagged") {
  const auto kb = KnowledgeBase::create(
      kValues, {{NormId("n"), {ValueId("v_care")}, Modality::Prohibition, {{"harmful", false}}, ""}},
      {fact("f", "harmful", Truth::True)}, {{OptionId("o"), OptionKind::Action, "", {FactId("f")}}},
      {{ArgumentId("a_pro"), OptionId("o"), Stance::Pro, Force::Confirming, {}, std::nullopt, {FactId("f")}, ""},
       {ArgumentId("a_con"), OptionId("o"), Stance::Con, Force::Excluding, {}, NormId("n"), {}, ""}});
  const auto found = check_consistency(kb);
  REQUIRE(found.size() == 1);
  CHECK(found[0].category == Inconsistency::Category::NormViolatingArgumentPro);
  CHECK(found[0].option == OptionId("o"));
  CHECK(found[0].norms == std::vector<NormId>{NormId("n")});
  CHECK(found[0].argument == ArgumentId("a_pro"));
}

TEST_CASE("orphan norms and contradictory norms are reported") {
  const auto kb = KnowledgeBase::create(
      kValues,
      {{NormId("n_no"), {ValueId("v_care")}, Modality::Prohibition, {{"p", false}}, ""},
       {NormId("n_yes"), {ValueId("v_care")}, Modality::Obligation, {{"p", false}}, ""}},
      {fact("f", "p", Truth::True)}, {{OptionId("o"), OptionKind::Action, "", {FactId("f")}}}, {});
  const auto found = check_consistency(kb);
  REQUIRE(found.size() == 3);
  CHECK(found[0].category == Inconsistency::Category::ContradictoryNormsOnOption);
  CHECK(found[0].norms == std::vector<NormId>{NormId("n_no"), NormId("n_yes")});
  CHECK(found[1].category == Inconsistency::Category::OrphanNorm);
  CHECK(found[2].category == Inconsistency::Category::OrphanNorm);
}

TEST_CASE("a norm without values is rejected at construction") {
  CHECK_THROWS_AS(KnowledgeBase::create(kValues, {{NormId("n"), {}, Modality::Prohibition, {}, ""}}, {}, {}, {}),
                  ValidationError);
}

TEST_CASE("validation reports every problem with its path") {
  const std::vector<Norm> norms = {
      {NormId("n_pro"), {ValueId("v_care")}, Modality::Prohibition, {{"nowhere", false}}, ""},
      {NormId("n_amb"), {ValueId("v_care")}, Modality::Obligation, {{"shared", false}}, ""}};
  const std::vector<Fact> facts = {fact("w1", "shared", Truth::True), fact("w2", "shared", Truth::False),
                                   fact("a1", "colour", Truth::True), fact("a2", "colour", Truth::True)};
  const std::vector<DecisionOption> options = {{OptionId("o"), OptionKind::Action, "", {FactId("a1"), FactId("a2")}},
                                               {OptionId("o"), OptionKind::Action, "", {}}};
  const std::vector<Argument> args = {
      {ArgumentId("x"), OptionId("ghost"), Stance::Pro, Force::Weighing, Rational(-1), std::nullopt, {FactId("w1")}, ""},
      {ArgumentId("y"), OptionId("o"), Stance::Pro, Force::Excluding, {}, NormId("n_pro"), {}, ""},
      {ArgumentId("z"), OptionId("o"), Stance::Con, Force::Weighing, Rational(-1), std::nullopt, {}, ""}};
  const auto issues = KnowledgeBase::validate(kValues, norms, facts, options, args);
  CHECK(has_issue(issues, "/norms/0/condition/0"));     // undeclared predicate
  CHECK(has_issue(issues, "/norms/1/condition/0"));     // two world facts share it
  CHECK(has_issue(issues, "/options/0/attributes/1"));  // repeated attribute predicate
  CHECK(has_issue(issues, "/options/1/id"));
  CHECK(has_issue(issues, "/arguments/0/option"));
  CHECK(has_issue(issues, "/arguments/0/weight"));
  CHECK(has_issue(issues, "/arguments/1/stance"));
  CHECK(has_issue(issues, "/arguments/1/grounds/norm"));  // pro citing a prohibition
  CHECK(has_issue(issues, "/arguments/2/grounds"));
}

TEST_CASE("predicates resolve to the option's attribute before a world fact") {
  const auto kb = KnowledgeBase::create(
      kValues, {}, {fact("f_a", "risky", Truth::True), fact("w", "risky", Truth::False), fact("g", "other", Truth::True)},
      {{OptionId("a"), OptionKind::Action, "", {FactId("f_a")}}, {OptionId("b"), OptionKind::Action, "", {}}}, {});
  CHECK(kb.resolve(OptionId("a"), "risky") == FactId("f_a"));
  CHECK(kb.resolve(OptionId("b"), "risky") == FactId("w"));
  CHECK(kb.resolve(OptionId("b"), "missing") == std::nullopt);
}

TEST_CASE("norm_applies examples") {
  const std::vector<Fact> facts = {fact("f1", "p1", Truth::True), fact("f2", "p2", Truth::Unknown)};
  const DecisionOption o{OptionId("o"), OptionKind::Action, "", {FactId("f1"), FactId("f2")}};
  const Norm always{NormId("n0"), {ValueId("v_care")}, Modality::Obligation, {}, ""};
  const Norm both{NormId("n1"), {ValueId("v_care")}, Modality::Prohibition, {{"p1", false}, {"p2", false}}, ""};
  const auto kb = KnowledgeBase::create(kValues, {always, both}, facts, {o}, {});
  const auto known = KnownFacts::from_facts(facts);

  CHECK(norm_applies(kb, always, o, known).applies());
  const auto r = norm_applies(kb, both, o, known);
  CHECK(r.status == NormApplication::Status::Unknown);
  CHECK(r.missing == std::vector<FactId>{FactId("f2")});

  KnownFacts resolved = known;
  resolved.set(FactId("f2"), Truth::False);
  const Norm negated{NormId("n2"), {ValueId("v_care")}, Modality::Prohibition, {{"p1", false}, {"p2", true}}, ""};
  CHECK(norm_applies(kb, negated, o, resolved).applies());
}

TEST_CASE("norm_applies agrees with the truth table over all 3^2 assignments") {
  const Truth all[] = {Truth::True, Truth::False, Truth::Unknown};
  for (bool neg1 : {false, true})
    for (bool neg2 : {false, true})
      for (Truth t1 : all)
        for (Truth t2 : all) {
          oracle::World w;
          w.facts = {fact("f1", "p1", t1), fact("f2", "p2", t2)};
          w.options = {{OptionId("o"), OptionKind::Action, "", {FactId("f1"), FactId("f2")}}};
          w.norms = {{NormId("n"), {ValueId("v0")}, Modality::Prohibition, {{"p1", neg1}, {"p2", neg2}}, ""}};
          const auto kb = gen::build(w);
          const auto known = KnownFacts::from_facts(w.facts);
          const auto expected = oracle::evaluate_norm(w, w.norms[0], w.options[0], known.all());
          const auto got = norm_applies(kb, w.norms[0], w.options[0], known);
          const auto want = expected.value == oracle::Tri::True    ? NormApplication::Status::Applies
                            : expected.value == oracle::Tri::False ? NormApplication::Status::NotApplicable
                                                                   : NormApplication::Status::Unknown;
          CHECK(got.status == want);
          CHECK(got.missing == expected.missing);
        }
}

TEST_CASE("norm_applies is monotone in knowledge") {
  gen::Rng rng(11);
  for (int round = 0; round < 300; ++round) {
    const auto w = gen::random_world(rng);
    const auto kb = gen::build(w);
    auto known = gen::random_known(rng, w);
    std::vector<FactId> unknown;
    for (const auto& f : w.facts)
      if (!known.contains(f.id)) unknown.push_back(f.id);
    if (unknown.empty()) continue;
    auto more = known;
    more[unknown[rng() % unknown.size()]] = (rng() % 2) ? Truth::True : Truth::False;
    for (const auto& n : kb.norms())
      for (const auto& o : kb.options()) {
        const auto before = norm_applies(kb, n, o, KnownFacts(known)).status;
        const auto after = norm_applies(kb, n, o, KnownFacts(more)).status;
        if (before != NormApplication::Status::Unknown) CHECK(before == after);
      }
  }
}

TEST_CASE("check_consistency does not depend on collection order") {
  gen::Rng rng(5);
  for (int round = 0; round < 200; ++round) {
    auto w = gen::random_world(rng);
    const auto base = check_consistency(gen::build(w));
    gen::shuffle(rng, w.facts);
    gen::shuffle(rng, w.norms);
    gen::shuffle(rng, w.options);
    gen::shuffle(rng, w.arguments);
    CHECK(check_consistency(gen::build(w)) == base);
  }
}

}
