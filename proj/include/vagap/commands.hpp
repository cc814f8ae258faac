#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vagap/service.hpp"

namespace vagap {

enum class OutputFormat { Table, Json };

/// Exit codes: 0 success, 1 failure (invalid scenario, I/O), 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Accepts a file path or the name of a bundled scenario.
std::filesystem::path resolve_scenario_path(const std::string& arg);

int cmd_validate(const std::string& scenario, OutputFormat format, std::ostream& out, std::ostream& err);
int cmd_run(const std::string& scenario, std::uint64_t seed, const std::vector<std::string>& presets,
            const std::filesystem::path& out_dir, OutputFormat format, std::ostream& out, std::ostream& err);
int cmd_compare(const std::string& scenario, std::uint64_t seed, const std::vector<std::string>& presets,
                const std::filesystem::path& out_dir, OutputFormat format, std::ostream& out, std::ostream& err);
int cmd_trace(const std::filesystem::path& run_dir, const std::optional<std::string>& agent, OutputFormat format,
              std::ostream& out, std::ostream& err);
int cmd_serve(const ServiceConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to the commands above.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vagap
