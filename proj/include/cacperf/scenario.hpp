#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cacperf/experiments.hpp"
#include "cacperf/model.hpp"
#include "cacperf/sim.hpp"
#include "cacperf/traffic.hpp"

namespace cacperf {

using ordered_json = nlohmann::ordered_json;

/// Sweep settings as stored in a scenario file (class is 0-based here,
/// 1-based in the file).
struct SweepSettings {
  std::size_t swept_class = 0;
  std::vector<double> grid;
  std::vector<SweepMode> modes;
};

/// Everything a scenario file can carry.
struct Scenario {
  SystemConfig config;
  std::optional<TrafficMixtureSpec> traffic;
  std::optional<SimParams> simulation;
  std::optional<SweepSettings> sweep;
};

/// Parses a JSON scenario. Syntax errors, wrong value types and unknown
/// keys throw ParseError; semantic checks are left to scenario_violations.
Scenario parse_scenario(std::string_view text);

/// Reads and parses a file; unreadable files throw IoError.
Scenario load_scenario(const std::filesystem::path& path);

/// Every violated invariant across config, traffic, simulation and sweep.
std::vector<std::string> scenario_violations(const Scenario& scenario);

ordered_json to_json(const SystemConfig& cfg);
ordered_json to_json(const DistributionSpec& spec);
ordered_json to_json(const TrafficMixtureSpec& mix);
ordered_json to_json(const SimParams& params);
ordered_json to_json(const Scenario& scenario);

}  // namespace cacperf
