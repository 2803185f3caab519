#include "wfollow/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <thread>

#include "wfollow/errors.hpp"

namespace wfollow::sim {
namespace {

// A followed person is associated with the obstacle map when the
// estimated goal lies within this distance of them.
constexpr double kTargetAssociationRadius = 1.0;

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, 0, what);
}

const world::Pedestrian* find_target(const world::WorldState& w, const std::string& id) {
  for (const auto& p : w.pedestrians) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

std::optional<std::string> associate_target(const world::WorldState& w, Vec2 goal) {
  std::optional<std::string> best;
  double best_d = kTargetAssociationRadius;
  for (const auto& p : w.pedestrians) {
    if (!p.active(w.time)) continue;
    const double d = distance(p.position, goal);
    if (d <= best_d) {
      best_d = d;
      best = p.id;
    }
  }
  return best;
}

}  // namespace

void validate(const ScenarioConfig& c) {
  require(c.dt > 0 && std::isfinite(c.dt), "dt", "must be positive");
  require(c.max_steps > 0, "max_steps", "must be positive");
  require(c.bounds.valid(), "world.bounds", "min must be below max");
  for (std::size_t i = 0; i < c.shelves.size(); ++i) {
    require(c.shelves[i].valid(), "world.shelves[" + std::to_string(i) + "]", "min must be below max");
  }
  require(c.robot.radius > 0, "robot.radius", "must be positive");
  require(c.robot.max_speed >= 0, "robot.max_speed", "must be non-negative");
  require(c.robot.max_turn_rate >= 0, "robot.max_turn_rate", "must be non-negative");
  int targets = 0;
  for (std::size_t i = 0; i < c.pedestrians.size(); ++i) {
    const auto& p = c.pedestrians[i];
    const std::string f = "pedestrians[" + std::to_string(i) + "]";
    require(!p.id.empty(), f + ".id", "must be non-empty");
    require(p.speed >= 0, f + ".speed", "must be non-negative");
    require(p.height > 0, f + ".height", "must be positive");
    require(p.shoulder_width > 0, f + ".shoulder_width", "must be positive");
    require(p.waypoints.empty() || p.waypoint_index < p.waypoints.size(), f + ".waypoint_index", "out of range");
    require(c.bounds.contains(p.position), f + ".start", "outside world bounds");
    for (std::size_t k = 0; k < p.waypoints.size(); ++k) {
      require(c.bounds.contains(p.waypoints[k]), f + ".waypoints[" + std::to_string(k) + "]",
              "outside world bounds");
    }
    for (std::size_t j = 0; j < i; ++j) {
      require(c.pedestrians[j].id != p.id, f + ".id", "duplicate pedestrian id '" + p.id + "'");
    }
    if (p.id == c.target_id) ++targets;
  }
  if (!c.pedestrians.empty()) {
    require(targets == 1, "target", "exactly one pedestrian must be flagged as the target");
  }
  require(c.camera.valid(), "camera", "invalid camera model");
  require(c.noise.valid(), "noise", "invalid noise spec");
  require(c.tracker.valid(), "tracker", "invalid tracker parameters");
  require(c.follow.valid(), "follow", "invalid follow parameters");
  require(c.apf.valid(), "apf", "invalid potential-field parameters");
  require(c.apf.rho0 > c.robot.radius, "apf.rho0", "must exceed the robot radius");
}

Vec2 estimate_ground_position(const world::Pose2D& robot, const sensor::CameraModel& camera, double u,
                              double depth) {
  const double right = (u - 0.5 * camera.image_width) * depth / camera.focal_px;
  return sensor::from_camera(robot, {depth, right});
}

RunResult run(const ScenarioConfig& config) {
  validate(config);

  world::WorldState w;
  w.time = 0.0;
  w.robot = config.robot;
  w.robot.pose.theta = wrap_angle(w.robot.pose.theta);
  w.pedestrians = config.pedestrians;
  w.shelves = config.shelves;
  w.bounds = config.bounds;

  sensor::NoiseSpec noise = config.noise;
  noise.rng_seed = config.rng_seed;

  tracker::Tracker trk(config.tracker);
  follow::TargetLock lock;
  std::optional<Vec2> last_goal;
  std::optional<int> previous_lock_id;
  bool ever_locked = false;
  bool in_collision = false;

  RunResult result;
  MetricsReport& m = result.metrics;
  m.min_clearance_overall = std::numeric_limits<double>::infinity();
  bool reached = false;

  for (std::size_t step = 0; step < config.max_steps; ++step) {
    // Pedestrians move first; the sensor then sees them with the robot at
    // its pre-step pose.
    for (auto& p : w.pedestrians) {
      if (p.active(w.time)) p = world::advance_pedestrian(std::move(p), config.dt);
    }
    w.time = static_cast<double>(step + 1) * config.dt;

    const auto projected = sensor::project(w, config.camera, noise.feature_dim);
    const auto visible = sensor::apply_occlusion(projected, w, config.camera);
    const auto detections = sensor::corrupt(visible, noise, step, config.camera);

    tracker::FrameResult frame;
    try {
      frame = trk.step(detections);
    } catch (const std::exception& e) {
      throw SimulationError(step, e.what());
    }

    if (lock.state == follow::LockState::Unlocked) {
      lock = follow::acquire_target(follow::visible_confirmed(frame, detections), config.camera.image_width);
      // A fresh acquisition after an earlier lock counts as an adoption.
      if (lock.state == follow::LockState::Locked && ever_locked) ++m.reacquisitions;
    } else {
      lock = follow::update_lock(lock, frame, detections, config.follow);
      if (lock.reacquired) ++m.reacquisitions;
    }
    if (lock.loss_event) ++m.target_loss_events;
    if (lock.state == follow::LockState::Locked && lock.locked_track_id) {
      if (previous_lock_id && *previous_lock_id != *lock.locked_track_id) ++m.id_switches_on_lock;
      previous_lock_id = lock.locked_track_id;
      ever_locked = true;
    }

    const world::Pose2D pose = w.robot.pose;
    const auto turn = follow::steer(lock.last_u, config.camera.image_width, config.follow);
    const world::Twist follow_cmd = follow::follow_command(lock, config.follow, turn);

    std::optional<Vec2> goal;
    if (lock.state == follow::LockState::Locked) {
      goal = estimate_ground_position(pose, config.camera, lock.last_u, lock.last_depth);
      last_goal = goal;
    } else if (lock.state == follow::LockState::Searching) {
      goal = last_goal;
    } else {
      last_goal.reset();
    }

    const Vec2 here = pose.position();
    const std::optional<std::string> exclude = goal ? associate_target(w, *goal) : std::nullopt;
    const apf::ForceResult force = apf::total_force(w, goal.value_or(here), exclude, config.apf);
    const world::Twist apf_cmd = apf::force_to_twist(force.resultant, pose.theta, config.apf, w.robot);

    world::Twist cmd = apf::blend(follow_cmd, apf_cmd, force.nearest_obstacle_distance, config.apf);
    // Distance keeping bounds the closing speed toward the goal in every
    // mode; motion across or away from the goal is left to the plant limit.
    if (goal) {
      const double speed_cap = follow::speed(distance(here, *goal), config.follow);
      const Vec2 to_goal = *goal - here;
      const double closing = norm(to_goal) > 0 ? std::cos(std::atan2(to_goal.y, to_goal.x) - pose.theta) : 1.0;
      if (closing > 0) cmd.v = std::min(cmd.v, speed_cap / closing);
    } else {
      cmd.v = 0.0;
    }
    cmd = world::clamp_to_plant(cmd, w.robot);

    w.robot.pose = world::step_unicycle(pose, cmd.v, cmd.omega, config.dt);
    if (!std::isfinite(w.robot.pose.x) || !std::isfinite(w.robot.pose.y) || !std::isfinite(w.robot.pose.theta)) {
      throw SimulationError(step, "robot pose became non-finite");
    }
    m.path_length += distance(here, w.robot.pose.position());

    const world::CollisionReport collision = world::check_collision(w);
    if (collision.any() && !in_collision) ++m.collisions;
    in_collision = collision.any();
    m.min_clearance_overall = std::min(m.min_clearance_overall, collision.min_clearance);

    TickRecord rec;
    rec.t = w.time;
    rec.robot = w.robot.pose;
    for (const auto& p : w.pedestrians) rec.pedestrians.push_back(p.position);
    const world::Pedestrian* target = find_target(w, config.target_id);
    if (target != nullptr) rec.target = target->position;
    if (lock.locked_track_id) rec.lock_id = lock.locked_track_id;
    rec.lock_state = lock.state;
    rec.cmd = cmd;
    rec.min_clearance = collision.min_clearance;
    rec.collision = collision.any();
    rec.local_minimum = force.local_minimum_flag;
    if (force.local_minimum_flag) ++m.local_minimum_ticks;
    rec.n_detections = detections.size();
    rec.n_confirmed = frame.confirmed.size();
    result.ticks.push_back(std::move(rec));

    std::vector<TrackRow> rows;
    for (const auto& t : trk.tracks()) rows.push_back({t.id, t.box(), t.stage});
    result.tracks.push_back(std::move(rows));
    result.detections.push_back(detections);

    std::vector<TrackObservation> observed;
    for (const auto& snap : frame.confirmed) {
      if (snap.time_since_update == 0) observed.push_back({snap.id, snap.box});
    }
    std::vector<TruthObservation> truths;
    for (const auto& d : visible) truths.push_back({d.source, d.box()});
    result.attribution.push_back(attribute_tracks(observed, truths));

    std::vector<std::string> hidden;
    for (const auto& d : projected) {
      const bool seen = std::any_of(visible.begin(), visible.end(),
                                    [&](const sensor::Detection& v) { return v.source == d.source; });
      if (!seen) hidden.push_back(d.source);
    }
    result.occluded.push_back(std::move(hidden));

    m.steps_run = step + 1;
    if (target != nullptr && target->finished() &&
        distance(target->position, w.robot.pose.position()) <= config.apf.goal_radius) {
      reached = true;
      break;
    }
  }

  m.tracker_id_switches_ground_truth = count_id_switches(result.attribution);
  const world::Pedestrian* target = find_target(w, config.target_id);
  m.final_distance_to_target = target != nullptr ? distance(target->position, w.robot.pose.position())
                                                 : std::numeric_limits<double>::infinity();
  m.completed = reached && m.collisions == 0 && lock.state == follow::LockState::Locked &&
                m.min_clearance_overall >= config.success.min_clearance &&
                m.final_distance_to_target <= config.success.max_final_distance;
  return result;
}

TrackLogResult track_log(const sensor::DetectionLog& log, const tracker::TrackerParams& params) {
  tracker::Tracker trk(params);
  TrackLogResult out;
  std::set<int> confirmed;
  for (std::size_t f = 0; f < log.size(); ++f) {
    tracker::FrameResult frame;
    try {
      frame = trk.step(log[f]);
    } catch (const std::exception& e) {
      throw SimulationError(f, e.what());
    }
    std::vector<TrackRow> rows;
    for (const auto& t : trk.tracks()) rows.push_back({t.id, t.box(), t.stage});
    out.tracks.push_back(std::move(rows));

    std::vector<TrackObservation> observed;
    for (const auto& snap : frame.confirmed) {
      confirmed.insert(snap.id);
      if (snap.time_since_update == 0) observed.push_back({snap.id, snap.box});
    }
    std::vector<TruthObservation> truths;
    for (const auto& d : log[f]) {
      if (!d.source.empty()) truths.push_back({d.source, d.box()});
    }
    out.attribution.push_back(attribute_tracks(observed, truths));
  }
  out.id_switches = count_id_switches(out.attribution);
  out.confirmed_ids.assign(confirmed.begin(), confirmed.end());
  return out;
}

std::vector<RunResult> run_batch(std::span<const ScenarioConfig> configs, unsigned jobs) {
  std::vector<RunResult> results(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        results[i] = run(configs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(configs.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace wfollow::sim
