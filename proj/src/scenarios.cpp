#include "wfollow/scenarios.hpp"

#include <algorithm>
#include <cctype>

namespace wfollow::sim {
namespace {

world::Pedestrian walker(std::string id, Vec2 start, std::vector<Vec2> waypoints, double speed,
                         double spawn_time = 0.0) {
  world::Pedestrian p;
  p.id = std::move(id);
  p.position = start;
  p.waypoints = std::move(waypoints);
  p.speed = speed;
  p.spawn_time = spawn_time;
  return p;
}

ScenarioConfig base(std::string name, std::uint64_t seed) {
  ScenarioConfig c;
  c.name = std::move(name);
  c.dt = 0.05;
  c.rng_seed = seed;
  c.noise.rng_seed = seed;
  c.noise.pixel_sigma = 2.0;
  c.noise.depth_sigma = 0.03;
  c.noise.feature_sigma = 0.1;
  c.noise.miss_rate = 0.0;
  c.noise.feature_dim = 16;
  return c;
}

}  // namespace

ScenarioConfig scenario_s1(std::uint64_t seed) {
  ScenarioConfig c = base("S1", seed);
  c.max_steps = 200;
  c.bounds = {-1.0, -6.0, 13.0, 6.0};
  c.robot.pose = {0.0, 0.0, 0.0};
  c.robot.max_speed = 0.0;
  c.robot.max_turn_rate = 0.0;
  // Image columns move at 0.4 m/s * f / depth; the near worker at 3.5 m and
  // the target at 7 m close on each other at ~86 px/s, which keeps the
  // target more than 60% covered for 15 frames around t = 4.6 s.
  c.pedestrians = {
      walker("worker_target", {7.0, 1.5}, {{7.0, -3.0}}, 0.4),
      walker("worker_near", {3.5, -2.0}, {{3.5, 2.0}}, 0.4),
      walker("worker_far", {11.0, -4.6}, {{8.5, -4.6}}, 0.25),
  };
  c.target_id = "worker_target";
  return c;
}

ScenarioConfig scenario_s2(std::uint64_t seed) {
  ScenarioConfig c = base("S2", seed);
  c.max_steps = 800;
  c.bounds = {0.0, 0.0, 20.0, 14.0};
  // Corridor along x between y = 0.8 and y = 5; the aisle between the two
  // upper shelf rows is centered on x = 10 and 2.0 m wide. The worker keeps
  // slightly right of the aisle center, so a follower trailing 1.5 to 2 m
  // does not clip the inside corner at (9, 5) on the way in.
  c.shelves = {
      {1.0, 0.0, 19.0, 0.8},
      {3.0, 5.0, 9.0, 13.0},
      {11.0, 5.0, 17.0, 13.0},
  };
  c.robot.pose = {2.5, 2.9, 0.0};
  c.pedestrians = {walker("worker_target", {4.0, 2.9}, {{10.3, 2.9}, {10.3, 11.5}}, 1.0)};
  c.target_id = "worker_target";
  return c;
}

ScenarioConfig scenario_s3(std::uint64_t seed) {
  ScenarioConfig c = base("S3", seed);
  c.max_steps = 700;
  c.bounds = {0.0, 0.0, 30.0, 6.0};
  c.shelves = {
      {0.0, 0.0, 30.0, 0.5},
      {0.0, 5.5, 30.0, 6.0},
  };
  c.robot.pose = {1.0, 3.0, 0.0};
  c.pedestrians = {
      walker("worker_target", {2.5, 3.0}, {{22.0, 3.0}}, 1.0),
      // Walks the neighboring lane, then cuts in toward the robot's line.
      walker(kS3Adversary, {18.0, 4.3}, {{12.0, 4.3}, {10.0, 3.2}, {1.0, 3.2}}, 1.2, 4.0),
  };
  c.target_id = "worker_target";
  return c;
}

std::vector<ScenarioConfig> builtin_scenarios(std::uint64_t seed) {
  return {scenario_s1(seed), scenario_s2(seed), scenario_s3(seed)};
}

std::optional<ScenarioConfig> builtin_scenario(const std::string& name, std::uint64_t seed) {
  std::string upper = name;
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char ch) { return std::toupper(ch); });
  if (upper == "S1") return scenario_s1(seed);
  if (upper == "S2") return scenario_s2(seed);
  if (upper == "S3") return scenario_s3(seed);
  return std::nullopt;
}

}  // namespace wfollow::sim
