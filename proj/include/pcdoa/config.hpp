#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcdoa/harness.hpp"

namespace pcdoa {

enum class OrthogonalityMode { jade, statistics };

/// Fully resolved scenario file. Every field has a default except the
/// source list.
struct RunConfig {
  GeometryParams geometry;
  ScenarioSpec scenario;
  std::vector<Estimator> estimators{Estimator::nls};
  AngleGrid grid;
  std::uint64_t seed = 0;
  int trials = 1;
  SweepAxis axis = SweepAxis::none;
  std::vector<double> sweep_values;
  unsigned threads = 0;
  OrthogonalityMode mode = OrthogonalityMode::jade;
  std::vector<Layout> layouts{Layout::equidistant, Layout::uniform_random};
};

/// Accepts a file path, or a bare name looked up as configs/<name>.json in
/// the working directory and then in the installed config directory.
/// Throws IoError when nothing is found.
std::filesystem::path resolve_config_path(const std::string& name_or_path);

/// Throws ConfigError on unknown keys, wrong types or invalid values.
RunConfig parse_config(const nlohmann::json& document);

/// resolve_config_path, read, parse_config. Malformed JSON is a ConfigError.
RunConfig load_config(const std::string& name_or_path);

/// Canonical form with every default spelled out; parse_config round-trips it.
nlohmann::json to_json(const RunConfig& config);

std::string to_string(Layout layout);
std::string to_string(Estimator estimator);
std::string to_string(SweepAxis axis);

TrialConfig trial_config(const RunConfig& config, Estimator estimator);
OrthogonalityConfig orthogonality_config(const RunConfig& config, Layout layout);

}  // namespace pcdoa
