#include "vagap/commands.hpp"

#include <atomic>
#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

namespace vagap {

using nlohmann::json;

std::filesystem::path resolve_scenario_path(const std::string& arg) {
  std::filesystem::path p(arg);
  if (std::filesystem::exists(p)) return p;
  const auto bundled = bundled_scenario_dir() / (arg + ".json");
  if (p.extension().empty() && std::filesystem::exists(bundled)) return bundled;
  return p;
}

namespace {

std::string rate_text(double r) { return json(r).dump(); }

json inconsistency_json(const Inconsistency& i) {
  json norms = json::array();
  for (const auto& n : i.norms) norms.push_back(n.str());
  return {{"category", to_string(i.category)},
          {"option", i.option ? json(i.option->str()) : json(nullptr)},
          {"norms", std::move(norms)},
          {"argument", i.argument ? json(i.argument->str()) : json(nullptr)}};
}

std::optional<ScenarioSpec> load_or_report(const std::string& scenario, std::ostream& err) {
  LoadResult r = load_scenario_file(resolve_scenario_path(scenario));
  if (r.ok()) return std::move(r.spec);
  err << "invalid scenario " << scenario << ":\n";
  for (const auto& i : r.errors) err << "  " << i.path << ": " << i.message << "\n";
  return std::nullopt;
}

std::optional<std::vector<Stage>> parse_presets(const std::vector<std::string>& presets, std::ostream& err) {
  std::vector<Stage> out;
  for (const auto& p : presets) {
    auto s = stage_from(p);
    if (!s) {
      err << "unknown preset '" << p << "' (expected S1|S2|S3|S4)\n";
      return std::nullopt;
    }
    out.push_back(*s);
  }
  return out;
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }

}  // namespace

int cmd_validate(const std::string& scenario, OutputFormat format, std::ostream& out, std::ostream& err) {
  LoadResult r = load_scenario_file(resolve_scenario_path(scenario));
  std::vector<Inconsistency> findings;
  if (r.ok()) findings = check_consistency(r.spec->kb);

  if (format == OutputFormat::Json) {
    json errors = json::array();
    for (const auto& i : r.errors) errors.push_back({{"path", i.path}, {"message", i.message}});
    json inconsistencies = json::array();
    for (const auto& f : findings) inconsistencies.push_back(inconsistency_json(f));
    out << json{{"scenario", scenario}, {"valid", r.ok()}, {"errors", errors}, {"inconsistencies", inconsistencies}}
               .dump(2)
        << "\n";
    return r.ok() ? kExitOk : kExitFailure;
  }
  if (!r.ok()) {
    err << "invalid scenario " << scenario << ":\n";
    for (const auto& i : r.errors) err << "  " << i.path << ": " << i.message << "\n";
    return kExitFailure;
  }
  const auto& kb = r.spec->kb;
  out << "ok: " << r.spec->name << " (" << kb.options().size() << " options, " << kb.norms().size() << " norms, "
      << kb.facts().size() << " facts, " << kb.arguments().size() << " arguments, " << r.spec->agents.size()
      << " agents)\n";
  for (const auto& f : findings) out << "  warning: " << inconsistency_json(f).dump() << "\n";
  return kExitOk;
}

int cmd_run(const std::string& scenario, std::uint64_t seed, const std::vector<std::string>& presets,
            const std::filesystem::path& out_dir, OutputFormat format, std::ostream& out, std::ostream& err) {
  auto stages = parse_presets(presets.empty() ? std::vector<std::string>{"S1"} : presets, err);
  if (!stages) return kExitUsage;
  auto spec = load_or_report(scenario, err);
  if (!spec) return kExitFailure;
  json results = json::array();
  for (Stage s : *stages) {
    const RunResult r = run(*spec, seed, s);
    std::filesystem::path dir;
    try {
      dir = write_run(r, out_dir);
    } catch (const std::exception& e) {
      err << e.what() << "\n";
      return kExitFailure;
    }
    if (format == OutputFormat::Json) {
      results.push_back({{"run_dir", dir.string()}, {"metrics", metrics_to_json(r)}});
    } else {
      out << dir.string() << ": gap_rate=" << rate_text(r.metrics.gap_rate)
          << " correction_count=" << r.metrics.correction_count << "\n";
    }
  }
  if (format == OutputFormat::Json) out << results.dump(2) << "\n";
  return kExitOk;
}

int cmd_compare(const std::string& scenario, std::uint64_t seed, const std::vector<std::string>& presets,
                const std::filesystem::path& out_dir, OutputFormat format, std::ostream& out, std::ostream& err) {
  if (presets.empty()) {
    err << "compare needs at least one --preset\n";
    return kExitUsage;
  }
  auto stages = parse_presets(presets, err);
  if (!stages) return kExitUsage;
  auto spec = load_or_report(scenario, err);
  if (!spec) return kExitFailure;

  json rows = json::array();
  for (Stage s : *stages) {
    const RunResult r = run(*spec, seed, s);
    rows.push_back({{"preset", to_string(s)},
                    {"gap_rate", r.metrics.gap_rate},
                    {"correction_count", r.metrics.correction_count},
                    {"decisions", r.metrics.decisions.size()},
                    {"advice_outcomes", r.metrics.advice_outcomes}});
  }
  const json doc = {{"scenario", spec->name}, {"seed", seed}, {"rows", rows}};
  try {
    std::filesystem::create_directories(out_dir);
    std::ofstream f(out_dir / ("compare__" + spec->name + "__seed" + std::to_string(seed) + ".json"),
                    std::ios::binary | std::ios::trunc);
    f << doc.dump(2) << "\n";
    if (!f) throw std::runtime_error("cannot write comparison under " + out_dir.string());
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitFailure;
  }

  if (format == OutputFormat::Json) {
    out << doc.dump(2) << "\n";
    return kExitOk;
  }
  out << pad("preset", 8) << pad("gap_rate", 10) << "correction_count\n";
  for (const auto& row : rows)
    out << pad(row["preset"].get<std::string>(), 8) << pad(rate_text(row["gap_rate"].get<double>()), 10)
        << row["correction_count"].get<int>() << "\n";
  return kExitOk;
}

int cmd_trace(const std::filesystem::path& run_dir, const std::optional<std::string>& agent, OutputFormat format,
              std::ostream& out, std::ostream& err) {
  std::ifstream in(run_dir / "trace.jsonl");
  if (!in) {
    err << "no trace.jsonl in " << run_dir.string() << "\n";
    return kExitFailure;
  }
  std::vector<json> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      err << "malformed trace line in " << run_dir.string() << "\n";
      return kExitFailure;
    }
    if (!agent || j.value("agent", "") == *agent) lines.push_back(std::move(j));
  }
  json reports = json::array();
  if (std::ifstream rf(run_dir / "reports.json"); rf) {
    json all = json::parse(rf, nullptr, false);
    if (all.is_array())
      for (auto& r : all)
        if (!agent || r.value("agent", "") == *agent) reports.push_back(r);
  }
  if (agent && lines.empty()) {
    err << "no trace events for agent '" << *agent << "'\n";
    return kExitFailure;
  }

  if (format == OutputFormat::Json) {
    out << json{{"events", lines}, {"reports", reports}}.dump(2) << "\n";
    return kExitOk;
  }
  out << pad("agent", 10) << pad("tick", 5) << pad("cycle", 6) << pad("kind", 11) << "detail\n";
  for (const auto& j : lines) {
    json detail = j;
    for (const char* k : {"agent", "tick", "cycle", "kind", "seq", "stage"}) detail.erase(k);
    out << pad(j.value("agent", ""), 10) << pad(std::to_string(j.value("tick", 0)), 5)
        << pad(std::to_string(j.value("cycle", 0)), 6) << pad(j.value("kind", ""), 11) << detail.dump() << "\n";
  }
  for (const auto& r : reports) {
    if (r.contains("advice") && r["advice"].is_object())
      out << "\nadvice for " << r.value("agent", "") << ": " << r["advice"]["explanation"].value("rendered", "") << "\n";
    if (r.contains("report") && r["report"].is_object()) {
      const auto& rep = r["report"];
      out << "\nintrospection for " << r.value("agent", "") << ": bias_labels=" << rep["bias_labels"].dump()
          << " initial=" << rep["initial_decision"].dump() << " final=" << rep["final_decision"].dump() << "\n";
    }
  }
  return kExitOk;
}

namespace {

std::atomic<HttpService*> g_service{nullptr};

void on_signal(int) {
  if (HttpService* s = g_service.load()) s->stop();
}

}  // namespace

int cmd_serve(const ServiceConfig& config, std::ostream& out, std::ostream& err) {
  HttpService service(config);
  if (!service.start()) {
    err << "cannot listen on " << config.host << ":" << config.port << "\n";
    return kExitFailure;
  }
  out << "listening on http://" << config.host << ":" << service.port() << " (scenarios: "
      << config.scenario_dir.string() << ", runs: " << config.run_dir.string() << ")" << std::endl;
  g_service.store(&service);
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  service.wait();
  g_service.store(nullptr);
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Value-action gap simulator and decision-support service", "vagap"};
  app.require_subcommand(1);

  std::string format_name = "table";
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format_name, "Output format")->check(CLI::IsMember({"table", "json"}));
  };

  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<std::string> presets;
  std::string out_dir = "runs";

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("--scenario", scenario, "Scenario file or bundled scenario name")->required();
  add_format(validate);

  auto* run_cmd = app.add_subcommand("run", "Run a scenario under stage presets and write run directories");
  run_cmd->add_option("--scenario", scenario, "Scenario file or bundled scenario name")->required();
  run_cmd->add_option("--seed", seed, "Seed (default 0)");
  run_cmd->add_option("--preset", presets, "Stage preset S1|S2|S3|S4, repeatable (default S1)");
  run_cmd->add_option("--out", out_dir, "Output directory (default runs)");
  add_format(run_cmd);

  auto* compare = app.add_subcommand("compare", "Compare gap rate and corrections across presets");
  compare->add_option("--scenario", scenario, "Scenario file or bundled scenario name")->required();
  compare->add_option("--seed", seed, "Seed (default 0)");
  compare->add_option("--preset", presets, "Stage preset S1|S2|S3|S4, repeatable");
  compare->add_option("--out", out_dir, "Directory for the comparison document (default runs)");
  add_format(compare);

  std::string run_dir;
  std::string agent;
  auto* trace = app.add_subcommand("trace", "Print a run's trace and explanations");
  trace->add_option("--run", run_dir, "Run directory")->required();
  trace->add_option("--agent", agent, "Only this agent");
  add_format(trace);

  ServiceConfig service_config;
  service_config.apply_environment();
  std::string listen;
  std::string scenario_dir;
  std::string runs_dir;
  std::string session_dir;
  auto* serve = app.add_subcommand("serve", "Serve the session API over HTTP");
  serve->add_option("--listen", listen, "host:port (env VAGAP_LISTEN, default 127.0.0.1:8080)");
  serve->add_option("--scenario-dir", scenario_dir, "Scenario directory (env VAGAP_SCENARIO_DIR)");
  serve->add_option("--run-dir", runs_dir, "Run directory (env VAGAP_RUN_DIR)");
  serve->add_option("--session-dir", session_dir, "Session log directory (env VAGAP_SESSION_DIR)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  const OutputFormat format = format_name == "json" ? OutputFormat::Json : OutputFormat::Table;

  try {
    if (validate->parsed()) return cmd_validate(scenario, format, out, err);
    if (run_cmd->parsed()) return cmd_run(scenario, seed, presets, out_dir, format, out, err);
    if (compare->parsed()) return cmd_compare(scenario, seed, presets, out_dir, format, out, err);
    if (trace->parsed())
      return cmd_trace(run_dir, agent.empty() ? std::nullopt : std::optional<std::string>(agent), format, out, err);
    if (serve->parsed()) {
      if (!listen.empty()) service_config.set_listen(listen);
      if (!scenario_dir.empty()) service_config.scenario_dir = scenario_dir;
      if (!runs_dir.empty()) service_config.run_dir = runs_dir;
      if (!session_dir.empty()) service_config.session_dir = session_dir;
      return cmd_serve(service_config, out, err);
    }
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace vagap
