#include "wfollow/apf.hpp"

#include <algorithm>
#include <cmath>

namespace wfollow::apf {
namespace {

Vec2 unit_or_zero(Vec2 v) {
  const double n = norm(v);
  return n > 0.0 ? (1.0 / n) * v : Vec2{};
}

Vec2 cap(Vec2 v, double limit) {
  const double n = norm(v);
  return n > limit ? (limit / n) * v : v;
}

template <typename Fn>
void for_each_obstacle(const world::WorldState& world, const std::optional<std::string>& exclude_id, Fn&& fn) {
  const Vec2 robot = world.robot.pose.position();
  const double r = world.robot.radius;
  for (const auto& shelf : world.shelves) fn(shelf_contact(robot, r, shelf));
  for (const auto& p : world.pedestrians) {
    if (!p.active(world.time)) continue;
    if (exclude_id && p.id == *exclude_id) continue;
    fn(disc_contact(robot, r, p.position, 0.5 * p.shoulder_width));
  }
}

}  // namespace

Vec2 attractive_force(Vec2 robot, Vec2 goal, double k_att) { return k_att * (goal - robot); }

double attractive_potential(Vec2 robot, Vec2 goal, double k_att) {
  const Vec2 d = goal - robot;
  return 0.5 * k_att * dot(d, d);
}

Vec2 repulsive_force(Vec2 robot, Vec2 obstacle_point, double rho, double k_rep, double rho0) {
  if (rho >= rho0) return {};
  rho = std::max(rho, kMinRho);
  const double magnitude = k_rep * (1.0 / rho - 1.0 / rho0) / (rho * rho);
  return magnitude * unit_or_zero(robot - obstacle_point);
}

double repulsive_potential(double rho, double k_rep, double rho0) {
  if (rho >= rho0) return 0.0;
  rho = std::max(rho, kMinRho);
  const double e = 1.0 / rho - 1.0 / rho0;
  return 0.5 * k_rep * e * e;
}

ObstacleContact shelf_contact(Vec2 robot, double robot_radius, const world::Shelf& shelf) {
  ObstacleContact c;
  c.point = world::nearest_point(robot, shelf);
  if (c.point == robot) {
    // Inside: push out through the nearest edge.
    const double dl = robot.x - shelf.min_x;
    const double dr = shelf.max_x - robot.x;
    const double db = robot.y - shelf.min_y;
    const double dt = shelf.max_y - robot.y;
    const double m = std::min({dl, dr, db, dt});
    if (m == dl) c.point = {robot.x + 1.0, robot.y};
    else if (m == dr) c.point = {robot.x - 1.0, robot.y};
    else if (m == db) c.point = {robot.x, robot.y + 1.0};
    else c.point = {robot.x, robot.y - 1.0};
    c.rho = kMinRho;
    return c;
  }
  c.rho = std::max(distance(robot, c.point) - robot_radius, kMinRho);
  return c;
}

ObstacleContact disc_contact(Vec2 robot, double robot_radius, Vec2 center, double disc_radius) {
  ObstacleContact c;
  const Vec2 d = robot - center;
  const double n = norm(d);
  c.point = n > 0.0 ? center + (disc_radius / n) * d : center;
  c.rho = std::max(n - disc_radius - robot_radius, kMinRho);
  return c;
}

ForceResult total_force(const world::WorldState& world, Vec2 goal, const std::optional<std::string>& exclude_id,
                        const ApfParams& params) {
  ForceResult out;
  const Vec2 robot = world.robot.pose.position();
  out.attractive = attractive_force(robot, goal, params.k_att);
  for_each_obstacle(world, exclude_id, [&](const ObstacleContact& c) {
    out.repulsive += repulsive_force(robot, c.point, c.rho, params.k_rep, params.rho0);
    out.nearest_obstacle_distance = std::min(out.nearest_obstacle_distance, c.rho);
  });
  const Vec2 sum = out.attractive + out.repulsive;
  out.resultant = cap(sum, params.force_cap);
  out.local_minimum_flag = norm(sum) < params.local_min_epsilon && distance(goal, robot) > params.goal_radius;
  return out;
}

double total_potential(const world::WorldState& world, Vec2 goal, const std::optional<std::string>& exclude_id,
                       const ApfParams& params) {
  double u = attractive_potential(world.robot.pose.position(), goal, params.k_att);
  for_each_obstacle(world, exclude_id,
                    [&](const ObstacleContact& c) { u += repulsive_potential(c.rho, params.k_rep, params.rho0); });
  return u;
}

world::Twist force_to_twist(Vec2 force, double robot_heading, const ApfParams& params,
                            const world::RobotPlant& plant) {
  const double magnitude = norm(force);
  if (magnitude == 0.0) return {0.0, 0.0};
  const double error = wrap_angle(std::atan2(force.y, force.x) - robot_heading);
  world::Twist cmd;
  cmd.omega = params.k_omega * error;
  cmd.v = params.k_v * magnitude * std::max(0.0, std::cos(error));
  return world::clamp_to_plant(cmd, plant);
}

world::Twist blend(const world::Twist& follow_cmd, const world::Twist& apf_cmd, double nearest_clearance,
                   const ApfParams& params) {
  const double hi = params.blend_distance;
  const double lo = 0.5 * params.rho0;
  if (nearest_clearance >= hi) return follow_cmd;
  if (nearest_clearance <= lo || lo >= hi) return apf_cmd;
  const double t = (nearest_clearance - lo) / (hi - lo);
  return {apf_cmd.v + t * (follow_cmd.v - apf_cmd.v), apf_cmd.omega + t * (follow_cmd.omega - apf_cmd.omega)};
}

}  // namespace wfollow::apf
