#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "wfollow/sim.hpp"

namespace wfollow::config {

inline constexpr const char* kSchema = "wfollow.scenario/1";
inline constexpr const char* kTrackerSchema = "wfollow.tracker/1";

/// Parses and validates a scenario document. Errors are ConfigError with
/// the dotted field path and the 1-based line of the offending value.
sim::ScenarioConfig parse_scenario(std::string_view text);

/// Reads `path` (IoError when unreadable) and parses it.
sim::ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Emits every field explicitly, so the output documents all defaults.
std::string serialize_scenario(const sim::ScenarioConfig& config);

/// Tracker parameter document used by the offline tracking command. All
/// keys are optional.
tracker::TrackerParams parse_tracker_params(std::string_view text);
std::string serialize_tracker_params(const tracker::TrackerParams& params);

/// Reads a whole file into a string; IoError on failure.
std::string read_text(const std::filesystem::path& path);

}  // namespace wfollow::config
