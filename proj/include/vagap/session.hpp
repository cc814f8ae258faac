#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vagap/advisor.hpp"
#include "vagap/scenario.hpp"
#include "vagap/simulation.hpp"

namespace vagap {

enum class SessionState { Created, OptionsPresented, AwaitingAnswers, Critiqued, Resolved };
std::string to_string(SessionState s);

class SessionError : public std::runtime_error {
 public:
  enum class Kind { NotFound, StateConflict, Validation };
  SessionError(Kind kind, const std::string& message, std::vector<Issue> issues = {})
      : std::runtime_error(message), kind_(kind), issues_(std::move(issues)) {}
  Kind kind() const noexcept { return kind_; }
  const std::vector<Issue>& issues() const noexcept { return issues_; }

 private:
  Kind kind_;
  std::vector<Issue> issues_;
};
std::string to_string(SessionError::Kind k);

/// One history record; `data` holds the type-specific fields.
struct SessionEvent {
  int seq = 0;
  std::string type;  // created, options_presented, proposal_submitted, critique_issued, fact_answered, resolved
  nlohmann::json data;

  nlohmann::json to_json() const;
  static SessionEvent from_json(const nlohmann::json& j);
  friend bool operator==(const SessionEvent&, const SessionEvent&) = default;
};

struct Resolution {
  OptionId option;
  std::optional<OptionId> last_recommendation;
  bool matches_recommendation = false;
  friend bool operator==(const Resolution&, const Resolution&) = default;
};

struct Session {
  std::string id;
  std::string scenario_ref;
  SessionState state = SessionState::Created;
  std::vector<SessionEvent> history;
  std::map<FactId, Truth> answered_facts;
  std::vector<RankedOption> options;
  std::optional<Proposal> proposal;
  std::optional<Critique> last_critique;
  std::optional<Resolution> resolution;
  int questions_answered = 0;
};

nlohmann::json to_json(const Session& s, bool with_history = true);

/// Scenario files in a directory, keyed by file stem. Invalid files are
/// listed with their errors and cannot back a session.
class ScenarioCatalog {
 public:
  struct Entry {
    std::string id;
    std::filesystem::path path;
    std::shared_ptr<const ScenarioSpec> spec;  // null when invalid
    std::vector<Issue> errors;
  };

  ScenarioCatalog() = default;
  explicit ScenarioCatalog(const std::filesystem::path& dir);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::shared_ptr<const ScenarioSpec> find(const std::string& id) const;
  void add(const std::string& id, ScenarioSpec spec);

 private:
  std::vector<Entry> entries_;
};

/// Thread-safe registry of sessions. Operations on one session are
/// serialized; different sessions proceed independently. With a session
/// directory every history record is appended to <dir>/<id>.jsonl, and
/// sessions found there are restored on construction.
class SessionManager {
 public:
  explicit SessionManager(ScenarioCatalog catalog, std::optional<std::filesystem::path> session_dir = std::nullopt);
  ~SessionManager();

  Session create(const std::string& scenario_id);
  Session get(const std::string& session_id) const;
  std::vector<std::string> list() const;
  Critique submit_proposal(const std::string& session_id, Proposal proposal);
  Critique answer_question(const std::string& session_id, const FactId& fact, Truth truth);
  Session resolve(const std::string& session_id, const OptionId& option);

  const ScenarioCatalog& catalog() const noexcept { return catalog_; }

  /// Re-executes a recorded history in a fresh session; the result carries
  /// the history the replay produced.
  static Session replay(const std::vector<SessionEvent>& history, const ScenarioCatalog& catalog);

  /// True when replaying reproduces every recorded critique byte for byte.
  static bool replay_matches(const std::vector<SessionEvent>& history, const ScenarioCatalog& catalog);

  static std::vector<SessionEvent> load_history(const std::filesystem::path& file);

 private:
  struct Slot;
  std::shared_ptr<Slot> slot(const std::string& id) const;
  std::shared_ptr<Slot> open_slot(const std::string& id, const std::string& scenario_id) const;
  void record(Slot& slot, const std::string& type, nlohmann::json data) const;
  Critique recompute(Slot& slot) const;

  ScenarioCatalog catalog_;
  std::optional<std::filesystem::path> session_dir_;
  mutable std::mutex registry_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  int next_id_ = 1;
};

}  // namespace vagap
