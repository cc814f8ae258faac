#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "vagap/session.hpp"

namespace vagap {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path scenario_dir = bundled_scenario_dir();
  std::filesystem::path run_dir = "runs";
  std::optional<std::filesystem::path> session_dir;

  /// Overrides fields from VAGAP_LISTEN, VAGAP_SCENARIO_DIR, VAGAP_RUN_DIR
  /// and VAGAP_SESSION_DIR when they are set.
  void apply_environment();
  /// Parses "host:port" or ":port" or "port"; throws std::invalid_argument.
  void set_listen(const std::string& listen);
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Transport-independent routing of the session API.
class SessionApi {
 public:
  explicit SessionApi(const ServiceConfig& config);

  ApiResponse handle(const std::string& method, const std::string& path, const std::string& body,
                     const std::map<std::string, std::string>& query = {});

  SessionManager& sessions() noexcept { return sessions_; }

 private:
  ServiceConfig config_;
  SessionManager sessions_;
};

/// Serves a SessionApi over HTTP on a background thread.
class HttpService {
 public:
  explicit HttpService(const ServiceConfig& config);
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  /// Binds and starts listening; false when the address cannot be bound.
  bool start();
  int port() const noexcept;
  void stop();
  /// Blocks until the server stops.
  void wait();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vagap
