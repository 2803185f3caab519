#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wfollow/apf.hpp"
#include "wfollow/detlog.hpp"
#include "wfollow/follow.hpp"
#include "wfollow/metrics.hpp"
#include "wfollow/sensor.hpp"
#include "wfollow/tracker.hpp"
#include "wfollow/world.hpp"

namespace wfollow::sim {

struct SuccessCriteria {
  double min_clearance{0.0};
  double max_final_distance{2.0};
  friend bool operator==(const SuccessCriteria&, const SuccessCriteria&) = default;
};

struct ScenarioConfig {
  std::string name;
  double dt{0.05};
  std::size_t max_steps{400};
  std::uint64_t rng_seed{0};
  world::Rect bounds{0.0, 0.0, 10.0, 10.0};
  std::vector<world::Shelf> shelves;
  world::RobotPlant robot;
  std::vector<world::Pedestrian> pedestrians;
  /// Ground-truth label of the person the robot is meant to follow. Used
  /// for metrics only; the robot discovers its target on its own.
  std::string target_id;
  sensor::CameraModel camera;
  sensor::NoiseSpec noise;
  tracker::TrackerParams tracker;
  follow::FollowParams follow;
  apf::ApfParams apf;
  SuccessCriteria success;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Throws ConfigError (without line information) on an invalid config.
void validate(const ScenarioConfig& config);

struct TickRecord {
  double t{0.0};
  world::Pose2D robot;
  std::vector<Vec2> pedestrians;
  std::optional<Vec2> target;
  std::optional<int> lock_id;
  follow::LockState lock_state{follow::LockState::Unlocked};
  world::Twist cmd;
  double min_clearance{0.0};
  bool collision{false};
  bool local_minimum{false};
  std::size_t n_detections{0};
  std::size_t n_confirmed{0};
};

struct MetricsReport {
  int id_switches_on_lock{0};
  int tracker_id_switches_ground_truth{0};
  int target_loss_events{0};
  int collisions{0};
  double min_clearance_overall{0.0};
  double final_distance_to_target{0.0};
  bool completed{false};
  double path_length{0.0};
  std::size_t steps_run{0};
  /// Lock adoptions after the first acquisition.
  int reacquisitions{0};
  std::size_t local_minimum_ticks{0};
};

struct TrackRow {
  int id{0};
  Box box;
  tracker::TrackStage stage{tracker::TrackStage::Tentative};
};

struct RunResult {
  std::vector<TickRecord> ticks;
  MetricsReport metrics;
  /// Per-frame tracker output (all live tracks after the update).
  std::vector<std::vector<TrackRow>> tracks;
  /// Per-frame detections handed to the tracker.
  sensor::DetectionLog detections;
  /// Per-frame ground-truth attribution of visible confirmed tracks.
  std::vector<Attribution> attribution;
  /// Per-frame labels of pedestrians that were fully hidden by occlusion
  /// while inside the camera frustum.
  std::vector<std::vector<std::string>> occluded;
};

/// Runs one scenario to termination. Identical configs give bit-identical
/// results. Throws ConfigError before step 0 and SimulationError mid-run.
RunResult run(const ScenarioConfig& config);

/// Runs independent scenarios on up to `jobs` threads; output order
/// matches input order.
std::vector<RunResult> run_batch(std::span<const ScenarioConfig> configs, unsigned jobs);

struct TrackLogResult {
  std::vector<std::vector<TrackRow>> tracks;
  /// Per-frame attribution against the detections' ground-truth labels;
  /// empty maps when the log carries no labels.
  std::vector<Attribution> attribution;
  int id_switches{0};
  /// Ids that reached the confirmed stage at least once, ascending.
  std::vector<int> confirmed_ids;
};

/// Runs the tracker alone over a recorded detection log.
TrackLogResult track_log(const sensor::DetectionLog& log, const tracker::TrackerParams& params);

/// Estimated ground position of a target seen at image column `u` with
/// forward depth `depth` from `robot`.
Vec2 estimate_ground_position(const world::Pose2D& robot, const sensor::CameraModel& camera, double u,
                              double depth);

}  // namespace wfollow::sim
