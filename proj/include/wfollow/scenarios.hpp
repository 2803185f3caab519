#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wfollow/sim.hpp"

namespace wfollow::sim {

/// Stationary camera watching three workers cross; the target is fully
/// hidden behind a nearer worker for a scripted stretch of frames.
ScenarioConfig scenario_s1(std::uint64_t seed = 1);

/// Target walks along a corridor and turns a right angle into a 2 m aisle
/// between two shelf rows.
ScenarioConfig scenario_s2(std::uint64_t seed = 1);

/// Straight corridor; a second worker appears ahead and walks toward the
/// robot on a near-collision line.
ScenarioConfig scenario_s3(std::uint64_t seed = 1);

std::vector<ScenarioConfig> builtin_scenarios(std::uint64_t seed = 1);

/// Looks up "S1", "S2" or "S3" (case-insensitive).
std::optional<ScenarioConfig> builtin_scenario(const std::string& name, std::uint64_t seed = 1);

/// Label of the S3 worker walking toward the robot.
inline constexpr const char* kS3Adversary = "worker_oncoming";

}  // namespace wfollow::sim
