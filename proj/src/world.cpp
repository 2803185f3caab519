#include "wfollow/world.hpp"

#include <algorithm>
#include <cmath>

namespace wfollow::world {

Pose2D step_unicycle(const Pose2D& pose, double v, double omega, double dt) {
  Pose2D next = pose;
  if (std::abs(omega) < 1e-9) {
    next.x += v * std::cos(pose.theta) * dt;
    next.y += v * std::sin(pose.theta) * dt;
    return next;
  }
  const double theta_end = pose.theta + omega * dt;
  const double r = v / omega;
  next.x += r * (std::sin(theta_end) - std::sin(pose.theta));
  next.y -= r * (std::cos(theta_end) - std::cos(pose.theta));
  next.theta = wrap_angle(theta_end);
  return next;
}

Pedestrian advance_pedestrian(Pedestrian p, double dt) {
  if (p.waypoints.empty() || p.finished()) return p;
  const Vec2 goal = p.waypoints[p.waypoint_index];
  const Vec2 delta = goal - p.position;
  const double remaining = norm(delta);
  const double step = p.speed * dt;
  if (remaining <= step) {
    p.position = goal;
    if (p.waypoint_index + 1 < p.waypoints.size()) ++p.waypoint_index;
    return p;
  }
  p.position += (step / remaining) * delta;
  return p;
}

Vec2 nearest_point(Vec2 point, const Shelf& shelf) {
  return {std::clamp(point.x, shelf.min_x, shelf.max_x),
          std::clamp(point.y, shelf.min_y, shelf.max_y)};
}

double clearance(Vec2 point, const Shelf& shelf) {
  const double dx = std::max({shelf.min_x - point.x, 0.0, point.x - shelf.max_x});
  const double dy = std::max({shelf.min_y - point.y, 0.0, point.y - shelf.max_y});
  return std::hypot(dx, dy);
}

double clearance(Vec2 point, std::span<const Shelf> shelves) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : shelves) best = std::min(best, clearance(point, s));
  return best;
}

CollisionReport check_collision(const WorldState& world) {
  CollisionReport report;
  const Vec2 c = world.robot.pose.position();
  const double r = world.robot.radius;

  const double shelf_gap = clearance(c, world.shelves);
  report.min_clearance = shelf_gap;
  report.shelf_collision = shelf_gap < r;

  for (const auto& p : world.pedestrians) {
    if (!p.active(world.time)) continue;
    const double d = distance(c, p.position);
    report.min_clearance = std::min(report.min_clearance, std::max(0.0, d - 0.5 * p.shoulder_width));
    if (d < r + 0.5 * p.shoulder_width) report.pedestrian_collision = true;
  }
  return report;
}

Twist clamp_to_plant(Twist cmd, const RobotPlant& plant) {
  cmd.v = std::clamp(cmd.v, 0.0, plant.max_speed);
  cmd.omega = std::clamp(cmd.omega, -plant.max_turn_rate, plant.max_turn_rate);
  return cmd;
}

}  // namespace wfollow::world
