#include "vagap/service.hpp"

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include <httplib.h>

namespace vagap {

using nlohmann::json;

void ServiceConfig::apply_environment() {
  if (const char* v = std::getenv("VAGAP_LISTEN"); v && *v) set_listen(v);
  if (const char* v = std::getenv("VAGAP_SCENARIO_DIR"); v && *v) scenario_dir = v;
  if (const char* v = std::getenv("VAGAP_RUN_DIR"); v && *v) run_dir = v;
  if (const char* v = std::getenv("VAGAP_SESSION_DIR"); v && *v) session_dir = v;
}

void ServiceConfig::set_listen(const std::string& listen) {
  std::string host_part = host;
  std::string port_part = listen;
  if (auto colon = listen.rfind(':'); colon != std::string::npos) {
    host_part = listen.substr(0, colon);
    port_part = listen.substr(colon + 1);
    if (host_part.empty()) host_part = "127.0.0.1";
  }
  int p = -1;
  try {
    std::size_t used = 0;
    p = std::stoi(port_part, &used);
    if (used != port_part.size()) p = -1;
  } catch (const std::exception&) {
    p = -1;
  }
  if (p < 0 || p > 65535) throw std::invalid_argument("invalid listen address '" + listen + "'");
  host = host_part;
  port = p;
}

namespace {

ApiResponse json_response(int status, const json& body) { return {status, "application/json", body.dump(2) + "\n"}; }

json issues_json(const std::vector<Issue>& issues) {
  json out = json::array();
  for (const auto& i : issues) out.push_back({{"path", i.path}, {"message", i.message}});
  return out;
}

ApiResponse error_response(int status, const std::string& kind, const std::string& message,
                           const std::vector<Issue>& issues = {}) {
  return json_response(status, {{"error", {{"kind", kind}, {"message", message}, {"issues", issues_json(issues)}}}});
}

int status_for(SessionError::Kind k) {
  switch (k) {
    case SessionError::Kind::NotFound: return 404;
    case SessionError::Kind::StateConflict: return 409;
    case SessionError::Kind::Validation: return 400;
  }
  return 400;
}

bool safe_id(const std::string& id) {
  static const std::regex ok("[A-Za-z0-9_.-]+");
  return std::regex_match(id, ok) && id != "." && id != "..";
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '/'))
    if (!part.empty()) parts.push_back(part);
  return parts;
}

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw SessionError(SessionError::Kind::Validation, std::string("malformed JSON body: ") + e.what());
  }
}

std::string required_string(const json& body, const char* key) {
  if (!body.is_object() || !body.contains(key) || !body[key].is_string())
    throw SessionError(SessionError::Kind::Validation, std::string("missing string field '") + key + "'",
                       {{std::string("/") + key, "missing or not a string"}});
  return body[key].get<std::string>();
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

SessionApi::SessionApi(const ServiceConfig& config)
    : config_(config), sessions_(ScenarioCatalog(config.scenario_dir), config.session_dir) {}

ApiResponse SessionApi::handle(const std::string& method, const std::string& path, const std::string& body,
                               const std::map<std::string, std::string>& query) {
  const auto parts = split_path(path);
  try {
    if (method == "GET" && parts.size() == 1 && parts[0] == "scenarios") {
      json out = json::array();
      for (const auto& e : sessions_.catalog().entries()) {
        json j = {{"id", e.id}, {"valid", e.spec != nullptr}, {"errors", issues_json(e.errors)}};
        if (e.spec) {
          j["name"] = e.spec->name;
          j["description"] = e.spec->description;
          j["options"] = e.spec->kb.options().size();
        }
        out.push_back(std::move(j));
      }
      return json_response(200, out);
    }

    if (method == "GET" && parts.size() == 1 && parts[0] == "runs") {
      std::vector<std::filesystem::path> dirs;
      if (std::filesystem::is_directory(config_.run_dir))
        for (const auto& e : std::filesystem::directory_iterator(config_.run_dir))
          if (e.is_directory() && std::filesystem::exists(e.path() / "metrics.json")) dirs.push_back(e.path());
      std::sort(dirs.begin(), dirs.end());
      json out = json::array();
      for (const auto& d : dirs) {
        json metrics = json::parse(read_file(d / "metrics.json"), nullptr, false);
        out.push_back({{"id", d.filename().string()}, {"metrics", metrics.is_discarded() ? json(nullptr) : metrics}});
      }
      return json_response(200, out);
    }

    if (method == "GET" && parts.size() == 3 && parts[0] == "runs" && parts[2] == "trace") {
      if (!safe_id(parts[1])) return error_response(400, "validation", "invalid run id");
      const auto file = config_.run_dir / parts[1] / "trace.jsonl";
      if (!std::filesystem::exists(file)) return error_response(404, "not_found", "unknown run '" + parts[1] + "'");
      std::string text = read_file(file);
      if (auto it = query.find("agent"); it != query.end()) {
        std::string filtered;
        std::stringstream ss(text);
        std::string line;
        while (std::getline(ss, line))
          if (!line.empty() && json::parse(line).value("agent", "") == it->second) filtered += line + "\n";
        text = std::move(filtered);
      }
      return {200, "application/x-ndjson", text};
    }

    if (parts.empty() || parts[0] != "sessions") return error_response(404, "not_found", "no route for " + path);

    if (parts.size() == 1) {
      if (method == "POST") {
        const json b = parse_body(body);
        const Session s = sessions_.create(required_string(b, "scenario"));
        return json_response(201, to_json(s));
      }
      if (method == "GET") return json_response(200, sessions_.list());
    }

    if (parts.size() == 2 && method == "GET") return json_response(200, to_json(sessions_.get(parts[1])));

    if (parts.size() == 3 && method == "POST") {
      const std::string& id = parts[1];
      const json b = parse_body(body);
      if (parts[2] == "proposal") {
        Proposal p;
        try {
          p = proposal_from_json(b);
        } catch (const ValidationError& e) {
          throw SessionError(SessionError::Kind::Validation, "malformed proposal", e.issues());
        }
        const Critique c = sessions_.submit_proposal(id, std::move(p));
        return json_response(200, {{"critique", to_json(c)}, {"session", to_json(sessions_.get(id), false)}});
      }
      if (parts[2] == "answers") {
        const FactId fact(required_string(b, "fact"));
        if (!b.contains("truth") || !b["truth"].is_boolean())
          throw SessionError(SessionError::Kind::Validation, "missing boolean field 'truth'",
                             {{"/truth", "missing or not a boolean"}});
        const Critique c = sessions_.answer_question(id, fact, b["truth"].get<bool>() ? Truth::True : Truth::False);
        return json_response(200, {{"critique", to_json(c)}, {"session", to_json(sessions_.get(id), false)}});
      }
      if (parts[2] == "resolve") {
        const Session s = sessions_.resolve(id, OptionId(required_string(b, "option")));
        return json_response(200, to_json(s));
      }
    }
    return error_response(404, "not_found", "no route for " + method + " " + path);
  } catch (const SessionError& e) {
    return error_response(status_for(e.kind()), to_string(e.kind()), e.what(), e.issues());
  } catch (const std::exception& e) {
    return error_response(500, "internal", e.what());
  }
}

struct HttpService::Impl {
  explicit Impl(const ServiceConfig& c) : config(c), api(c) {}

  ServiceConfig config;
  SessionApi api;
  httplib::Server server;
  std::thread thread;
  int port = 0;
};

HttpService::HttpService(const ServiceConfig& config) : impl_(std::make_unique<Impl>(config)) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    const ApiResponse r = impl_->api.handle(req.method, req.path, req.body, query);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  auto& s = impl_->server;
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                         {"Access-Control-Allow-Headers", "Content-Type"},
                         {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  s.Get(".*", forward);
  s.Post(".*", forward);
  s.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

HttpService::~HttpService() {
  stop();
  wait();
}

bool HttpService::start() {
  auto& s = impl_->server;
  if (impl_->config.port == 0) {
    impl_->port = s.bind_to_any_port(impl_->config.host);
    if (impl_->port < 0) return false;
  } else {
    if (!s.bind_to_port(impl_->config.host, impl_->config.port)) return false;
    impl_->port = impl_->config.port;
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return true;
}

int HttpService::port() const noexcept { return impl_->port; }

void HttpService::stop() { impl_->server.stop(); }

void HttpService::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace vagap
