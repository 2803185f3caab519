#pragma once

#include <string>
#include <vector>

#include "wfollow/report.hpp"
#include "wfollow/sim.hpp"

namespace wfollow::svg {

/// Top-down figure: shelves, each pedestrian's walking route as a dashed
/// polyline, the robot trajectory, and start/end markers.
std::string trajectory_plot(const sim::ScenarioConfig& config, const sim::RunResult& result);

/// Cell-colored heatmap of the total potential with force arrows.
std::string field_plot(const sim::ScenarioConfig& config, const std::vector<report::FieldSample>& samples,
                       std::size_t grid, Vec2 goal);

}  // namespace wfollow::svg
