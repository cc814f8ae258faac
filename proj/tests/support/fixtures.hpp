#pragma once

#include <filesystem>
#include <string>

#include "vagap/scenario.hpp"

namespace fixtures {

inline vagap::ScenarioSpec bundled(const std::string& name) {
  auto r = vagap::load_scenario_file(vagap::bundled_scenario_dir() / (name + ".json"));
  if (!r.ok()) throw std::runtime_error("bundled scenario " + name + " failed to load");
  return *r.spec;
}

inline const char* const kNames[] = {"ethical_workplace", "sustainable_procurement", "short_haul_travel"};

/// A fresh, empty directory under the build tree.
inline std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::path(VAGAP_TEST_TMP) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
