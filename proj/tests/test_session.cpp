#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <functional>
#include <thread>

#include "support/fixtures.hpp"
#include "vagap/session.hpp"

using namespace vagap;

namespace {

Proposal proposal(const std::string& option, std::vector<std::string> stated) {
  Proposal p{"user", OptionId(option), {}, {}};
  for (const auto& s : stated) p.stated_arguments.emplace_back(s);
  return p;
}

SessionError::Kind error_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const SessionError& e) {
    return e.kind();
  }
  FAIL("no SessionError thrown");
  return SessionError::Kind::Validation;
}

}  // namespace

TEST_SUITE("session") {

TEST_CASE("create") {
  SessionManager m{ScenarioCatalog(bundled_scenario_dir())};
  const Session a = m.create("ethical_workplace");
  CHECK(a.state == SessionState::OptionsPresented);
  REQUIRE(a.options.size() == 3);
  CHECK(a.options.front().option_id == OptionId("opt_redistribute"));
  const Session b = m.create("ethical_workplace");
  CHECK(a.id != b.id);
  CHECK(m.get(a.id).history.size() == 2);
  CHECK(m.list() == std::vector<std::string>{a.id, b.id});
  CHECK(error_kind([&] { m.create("nope"); }) == SessionError::Kind::NotFound);
  CHECK(error_kind([&] { m.get("session-99"); }) == SessionError::Kind::NotFound);
}

TEST_CASE("proposal outcomes") {
  SessionManager m{ScenarioCatalog(bundled_scenario_dir())};

  SUBCASE("violating option") {
    const auto id = m.create("ethical_workplace").id;
    const Critique c = m.submit_proposal(id, proposal("opt_raise_workload", {"a_raise_meets_deadline"}));
    CHECK(c.verdict == Verdict::Reject);
    CHECK(c.recommendation == OptionId("opt_redistribute"));
  }
  SUBCASE("compliant option") {
    const auto id = m.create("ethical_workplace").id;
    const Critique c = m.submit_proposal(id, proposal("opt_redistribute", {"a_redistribute_consult"}));
    CHECK(c.verdict == Verdict::Endorse);
    CHECK(m.get(id).state == SessionState::Critiqued);
  }
  SUBCASE("blocked option, answered either way") {
    for (Truth answer : {Truth::True, Truth::False}) {
      const auto id = m.create("sustainable_procurement").id;
      const Critique c = m.submit_proposal(id, proposal("opt_caterer_a", {"a_a_cheap", "a_a_recyclable"}));
      CHECK(c.verdict == Verdict::Challenge);
      CHECK(c.questions.size() == 1);
      CHECK(m.get(id).state == SessionState::AwaitingAnswers);
      CHECK(error_kind([&] { m.answer_question(id, FactId("f_budget_tight"), Truth::True); }) ==
            SessionError::Kind::Validation);
      const Critique after = m.answer_question(id, FactId("f_a_plastic"), answer);
      CHECK(after.verdict == (answer == Truth::True ? Verdict::Reject : Verdict::Endorse));
      CHECK(after.questions.empty());
      const Session s = m.get(id);
      CHECK(s.state == SessionState::Critiqued);
      CHECK(s.questions_answered == 1);
    }
  }
  SUBCASE("malformed proposal") {
    const auto id = m.create("ethical_workplace").id;
    CHECK(error_kind([&] { m.submit_proposal(id, proposal("opt_none", {})); }) == SessionError::Kind::Validation);
    CHECK(m.get(id).state == SessionState::OptionsPresented);
  }
}

TEST_CASE("resolution") {
  SessionManager m{ScenarioCatalog(bundled_scenario_dir())};
  const auto id = m.create("ethical_workplace").id;
  CHECK(error_kind([&] { m.resolve(id, OptionId("opt_redistribute")); }) == SessionError::Kind::StateConflict);
  CHECK(error_kind([&] { m.answer_question(id, FactId("f_deadline"), Truth::True); }) ==
        SessionError::Kind::StateConflict);
  m.submit_proposal(id, proposal("opt_redistribute", {"a_redistribute_consult"}));

  SUBCASE("with the recommended option") {
    const Session s = m.resolve(id, OptionId("opt_redistribute"));
    CHECK(s.state == SessionState::Resolved);
    REQUIRE(s.resolution);
    CHECK(s.resolution->matches_recommendation);
    CHECK(error_kind([&] { m.resolve(id, OptionId("opt_redistribute")); }) == SessionError::Kind::StateConflict);
    CHECK(error_kind([&] { m.submit_proposal(id, proposal("opt_redistribute", {})); }) ==
          SessionError::Kind::StateConflict);
  }
  SUBCASE("with a rejected option") {
    const auto other = m.create("short_haul_travel").id;
    const Critique c = m.submit_proposal(other, proposal("opt_flight", {"a_flight_cheap"}));
    CHECK(c.verdict == Verdict::Reject);
    const Session s = m.resolve(other, OptionId("opt_flight"));
    CHECK_FALSE(s.resolution->matches_recommendation);
    CHECK(s.resolution->last_recommendation == OptionId("opt_train"));
  }
}

TEST_CASE("history is append-only and replays identically") {
  SessionManager m{ScenarioCatalog(bundled_scenario_dir())};
  const auto id = m.create("sustainable_procurement").id;
  std::vector<SessionEvent> seen = m.get(id).history;
  auto grows_from = [&](const std::vector<SessionEvent>& now) {
    REQUIRE(now.size() > seen.size());
    for (std::size_t i = 0; i < seen.size(); ++i) CHECK(now[i] == seen[i]);
    seen = now;
  };
  m.submit_proposal(id, proposal("opt_caterer_a", {"a_a_cheap"}));
  grows_from(m.get(id).history);
  m.answer_question(id, FactId("f_a_plastic"), Truth::False);
  grows_from(m.get(id).history);
  m.submit_proposal(id, proposal("opt_caterer_b", {"a_b_recyclable"}));
  grows_from(m.get(id).history);
  m.resolve(id, OptionId("opt_caterer_b"));
  grows_from(m.get(id).history);

  const ScenarioCatalog catalog(bundled_scenario_dir());
  CHECK(SessionManager::replay_matches(seen, catalog));
  const Session replayed = SessionManager::replay(seen, catalog);
  CHECK(to_json(replayed).dump() == to_json(m.get(id)).dump());

  for (const auto& e : seen)
    if (e.type == "critique_issued")
      for (const auto& q : e.data["critique"]["questions"])
        CHECK(catalog.find("sustainable_procurement")->kb.find_fact(FactId(q["fact"].get<std::string>())));
}

TEST_CASE("sessions persist and are restored") {
  const auto dir = fixtures::scratch("sessions");
  std::string id;
  {
    SessionManager m{ScenarioCatalog(bundled_scenario_dir()), dir};
    id = m.create("sustainable_procurement").id;
    m.submit_proposal(id, proposal("opt_caterer_a", {"a_a_cheap"}));
  }
  const auto history = SessionManager::load_history(dir / (id + ".jsonl"));
  CHECK(history.size() == 4);
  SessionManager restored{ScenarioCatalog(bundled_scenario_dir()), dir};
  const Session s = restored.get(id);
  CHECK(s.state == SessionState::AwaitingAnswers);
  CHECK(s.history == history);
  restored.answer_question(id, FactId("f_a_plastic"), Truth::True);
  CHECK(restored.create("ethical_workplace").id != id);
  CHECK(SessionManager::load_history(dir / (id + ".jsonl")).size() == 6);
}

TEST_CASE("session events round-trip through json") {
  const SessionEvent e{3, "fact_answered", {{"fact", "f"}, {"truth", true}}};
  CHECK(SessionEvent::from_json(e.to_json()) == e);
}

TEST_CASE("sessions can be used from several threads") {
  SessionManager m{ScenarioCatalog(bundled_scenario_dir())};
  std::vector<std::thread> workers;
  std::vector<std::string> ids(6);
  for (int i = 0; i < 6; ++i)
    workers.emplace_back([&, i] {
      ids[i] = m.create("sustainable_procurement").id;
      m.submit_proposal(ids[i], proposal("opt_caterer_b", {"a_b_recyclable"}));
    });
  for (auto& t : workers) t.join();
  std::sort(ids.begin(), ids.end());
  CHECK(std::unique(ids.begin(), ids.end()) == ids.end());
  for (const auto& id : ids) CHECK(m.get(id).history.size() == 4);
}

}
