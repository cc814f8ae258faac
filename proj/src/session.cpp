#include "vagap/session.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

namespace vagap {

using nlohmann::json;

std::string to_string(SessionState s) {
  switch (s) {
    case SessionState::Created: return "Created";
    case SessionState::OptionsPresented: return "OptionsPresented";
    case SessionState::AwaitingAnswers: return "AwaitingAnswers";
    case SessionState::Critiqued: return "Critiqued";
    case SessionState::Resolved: return "Resolved";
  }
  return "Created";
}

std::string to_string(SessionError::Kind k) {
  switch (k) {
    case SessionError::Kind::NotFound: return "not_found";
    case SessionError::Kind::StateConflict: return "state_conflict";
    case SessionError::Kind::Validation: return "validation";
  }
  return "validation";
}

json SessionEvent::to_json() const { return {{"seq", seq}, {"type", type}, {"data", data}}; }

SessionEvent SessionEvent::from_json(const json& j) {
  return {j.at("seq").get<int>(), j.at("type").get<std::string>(), j.value("data", json::object())};
}

namespace {

json opt(const std::optional<OptionId>& o) { return o ? json(o->str()) : json(nullptr); }

}  // namespace

json to_json(const Session& s, bool with_history) {
  json options = json::array();
  for (const auto& r : s.options) options.push_back(to_json(r));
  json answers = json::object();
  for (const auto& [f, t] : s.answered_facts) answers[f.str()] = t == Truth::True;
  json j = {{"id", s.id},
            {"scenario", s.scenario_ref},
            {"state", to_string(s.state)},
            {"options", std::move(options)},
            {"answered_facts", std::move(answers)},
            {"questions_answered", s.questions_answered},
            {"proposal", s.proposal ? to_json(*s.proposal) : json(nullptr)},
            {"critique", s.last_critique ? to_json(*s.last_critique) : json(nullptr)},
            {"resolution", s.resolution ? json{{"option", s.resolution->option.str()},
                                               {"last_recommendation", opt(s.resolution->last_recommendation)},
                                               {"matches_recommendation", s.resolution->matches_recommendation}}
                                        : json(nullptr)}};
  if (with_history) {
    json history = json::array();
    for (const auto& e : s.history) history.push_back(e.to_json());
    j["history"] = std::move(history);
  }
  return j;
}

// ---- catalog --------------------------------------------------------------

ScenarioCatalog::ScenarioCatalog(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(dir))
    for (const auto& e : std::filesystem::directory_iterator(dir))
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    LoadResult r = load_scenario_file(f);
    Entry entry{f.stem().string(), f, nullptr, std::move(r.errors)};
    if (r.spec) entry.spec = std::make_shared<const ScenarioSpec>(std::move(*r.spec));
    entries_.push_back(std::move(entry));
  }
}

std::shared_ptr<const ScenarioSpec> ScenarioCatalog::find(const std::string& id) const {
  for (const auto& e : entries_)
    if (e.id == id) return e.spec;
  return nullptr;
}

void ScenarioCatalog::add(const std::string& id, ScenarioSpec spec) {
  entries_.erase(std::remove_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.id == id; }),
                 entries_.end());
  entries_.push_back({id, {}, std::make_shared<const ScenarioSpec>(std::move(spec)), {}});
}

// ---- session operations ---------------------------------------------------

struct SessionManager::Slot {
  std::mutex mutex;
  Session session;
  std::shared_ptr<const ScenarioSpec> spec;
  std::vector<Fact> env;
  AdvisorContext ctx;
  std::optional<std::filesystem::path> file;
};

std::shared_ptr<SessionManager::Slot> SessionManager::open_slot(const std::string& id,
                                                                const std::string& scenario_id) const {
  auto spec = catalog_.find(scenario_id);
  if (!spec) throw SessionError(SessionError::Kind::NotFound, "unknown scenario '" + scenario_id + "'");
  auto s = std::make_shared<Slot>();
  s->spec = spec;
  s->env = settled_environment(*spec).facts;
  s->ctx.appraisal_rules = spec->config.appraisal_rules;
  s->ctx.self.forgetting_threshold = spec->config.forgetting_threshold;
  AgentConfig user = generic_user_model();
  user.forgetting_threshold = spec->config.forgetting_threshold;
  s->ctx.user_model = user;
  s->session.id = id;
  s->session.scenario_ref = scenario_id;
  if (session_dir_) s->file = *session_dir_ / (id + ".jsonl");
  return s;
}

void SessionManager::record(Slot& slot, const std::string& type, json data) const {
  SessionEvent e{static_cast<int>(slot.session.history.size()), type, std::move(data)};
  if (slot.file) {
    // One complete line per write, flushed before the event counts as recorded.
    const std::string line = e.to_json().dump() + "\n";
    std::ofstream out(*slot.file, std::ios::binary | std::ios::app);
    if (!out) throw std::runtime_error("cannot append to " + slot.file->string());
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + slot.file->string());
  }
  slot.session.history.push_back(std::move(e));
}

Critique SessionManager::recompute(Slot& slot) const {
  Session& s = slot.session;
  Proposal p = *s.proposal;
  p.answered_facts = s.answered_facts;
  Critique c = critique(p, slot.env, slot.spec->kb, slot.ctx);
  s.last_critique = c;
  s.state = c.questions.empty() ? SessionState::Critiqued : SessionState::AwaitingAnswers;
  record(slot, "critique_issued", {{"critique", to_json(c)}, {"state", to_string(s.state)}});
  return c;
}

namespace {

void require_state(const Session& s, std::initializer_list<SessionState> allowed, const char* op) {
  if (std::find(allowed.begin(), allowed.end(), s.state) != allowed.end()) return;
  throw SessionError(SessionError::Kind::StateConflict,
                     std::string(op) + " is not allowed in state " + to_string(s.state));
}

}  // namespace

SessionManager::SessionManager(ScenarioCatalog catalog, std::optional<std::filesystem::path> session_dir)
    : catalog_(std::move(catalog)), session_dir_(std::move(session_dir)) {
  if (!session_dir_) return;
  std::filesystem::create_directories(*session_dir_);
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(*session_dir_))
    if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      const auto history = load_history(f);
      Session restored = replay(history, catalog_);
      auto s = open_slot(restored.id, restored.scenario_ref);
      s->session = std::move(restored);
      s->file = f;
      const std::string prefix = "session-";
      if (s->session.id.rfind(prefix, 0) == 0)
        next_id_ = std::max(next_id_, std::stoi(s->session.id.substr(prefix.size())) + 1);
      sessions_[s->session.id] = std::move(s);
    } catch (const std::exception& e) {
      std::cerr << "skipping session log " << f << ": " << e.what() << "\n";
    }
  }
}

SessionManager::~SessionManager() = default;

std::shared_ptr<SessionManager::Slot> SessionManager::slot(const std::string& id) const {
  std::lock_guard lock(registry_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw SessionError(SessionError::Kind::NotFound, "unknown session '" + id + "'");
  return it->second;
}

Session SessionManager::create(const std::string& scenario_id) {
  std::string id;
  {
    std::lock_guard lock(registry_mutex_);
    if (!catalog_.find(scenario_id))
      throw SessionError(SessionError::Kind::NotFound, "unknown scenario '" + scenario_id + "'");
    id = "session-" + std::to_string(next_id_++);
  }
  auto s = open_slot(id, scenario_id);
  {
    std::lock_guard lock(s->mutex);
    record(*s, "created", {{"session_id", id}, {"scenario", scenario_id}});
    s->session.options = recommend(s->env, s->spec->kb, s->ctx);
    json options = json::array();
    for (const auto& r : s->session.options) options.push_back(to_json(r));
    s->session.state = SessionState::OptionsPresented;
    record(*s, "options_presented", {{"options", std::move(options)}});
  }
  std::lock_guard lock(registry_mutex_);
  sessions_[id] = s;
  return s->session;
}

Session SessionManager::get(const std::string& session_id) const {
  auto s = slot(session_id);
  std::lock_guard lock(s->mutex);
  return s->session;
}

std::vector<std::string> SessionManager::list() const {
  std::lock_guard lock(registry_mutex_);
  std::vector<std::string> out;
  for (const auto& [id, s] : sessions_) out.push_back(id);
  return out;
}

Critique SessionManager::submit_proposal(const std::string& session_id, Proposal proposal) {
  auto s = slot(session_id);
  std::lock_guard lock(s->mutex);
  Session& session = s->session;
  require_state(session, {SessionState::OptionsPresented, SessionState::Critiqued}, "submit_proposal");
  if (auto problems = validate_proposal(proposal, s->spec->kb); !problems.empty())
    throw SessionError(SessionError::Kind::Validation, "malformed proposal", std::move(problems));
  record(*s, "proposal_submitted", {{"proposal", to_json(proposal)}});
  for (const auto& [f, t] : proposal.answered_facts) session.answered_facts[f] = t;
  session.proposal = std::move(proposal);
  return recompute(*s);
}

Critique SessionManager::answer_question(const std::string& session_id, const FactId& fact, Truth truth) {
  auto s = slot(session_id);
  std::lock_guard lock(s->mutex);
  Session& session = s->session;
  require_state(session, {SessionState::AwaitingAnswers}, "answer_question");
  if (truth == Truth::Unknown)
    throw SessionError(SessionError::Kind::Validation, "an answer must be true or false",
                       {{"/truth", "expected true or false"}});
  const auto& questions = session.last_critique->questions;
  if (std::none_of(questions.begin(), questions.end(), [&](const Question& q) { return q.fact_id == fact; }))
    throw SessionError(SessionError::Kind::Validation, "fact '" + fact.str() + "' was not asked",
                       {{"/fact", "not an open question"}});
  record(*s, "fact_answered", {{"fact", fact.str()}, {"truth", truth == Truth::True}});
  session.answered_facts[fact] = truth;
  ++session.questions_answered;
  return recompute(*s);
}

Session SessionManager::resolve(const std::string& session_id, const OptionId& option) {
  auto s = slot(session_id);
  std::lock_guard lock(s->mutex);
  Session& session = s->session;
  require_state(session, {SessionState::Critiqued}, "resolve");
  if (!s->spec->kb.find_option(option))
    throw SessionError(SessionError::Kind::Validation, "unknown option '" + option.str() + "'",
                       {{"/option", "unknown option id"}});
  Resolution r{option, session.last_critique->recommendation, false};
  if (!r.last_recommendation && !session.options.empty()) r.last_recommendation = session.options.front().explanation.recommended;
  r.matches_recommendation = r.last_recommendation == option;
  record(*s, "resolved",
         {{"option", option.str()},
          {"last_recommendation", opt(r.last_recommendation)},
          {"matches_recommendation", r.matches_recommendation}});
  session.resolution = r;
  session.state = SessionState::Resolved;
  return session;
}

std::vector<SessionEvent> SessionManager::load_history(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::vector<SessionEvent> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(SessionEvent::from_json(json::parse(line)));
  return out;
}

Session SessionManager::replay(const std::vector<SessionEvent>& history, const ScenarioCatalog& catalog) {
  if (history.empty() || history.front().type != "created")
    throw std::invalid_argument("a session history starts with a created record");
  const json& first = history.front().data;
  SessionManager scratch(catalog);
  std::string id = scratch.create(first.at("scenario").get<std::string>()).id;
  for (std::size_t i = 1; i < history.size(); ++i) {
    const SessionEvent& e = history[i];
    if (e.type == "proposal_submitted") {
      scratch.submit_proposal(id, proposal_from_json(e.data.at("proposal")));
    } else if (e.type == "fact_answered") {
      scratch.answer_question(id, FactId(e.data.at("fact").get<std::string>()),
                              e.data.at("truth").get<bool>() ? Truth::True : Truth::False);
    } else if (e.type == "resolved") {
      scratch.resolve(id, OptionId(e.data.at("option").get<std::string>()));
    }
  }
  Session out = scratch.get(id);
  out.id = first.value("session_id", id);
  out.history.front().data["session_id"] = out.id;
  return out;
}

bool SessionManager::replay_matches(const std::vector<SessionEvent>& history, const ScenarioCatalog& catalog) {
  const Session replayed = replay(history, catalog);
  if (replayed.history.size() != history.size()) return false;
  for (std::size_t i = 0; i < history.size(); ++i)
    if (replayed.history[i].to_json().dump() != history[i].to_json().dump()) return false;
  return true;
}

}  // namespace vagap
