#pragma once

#include <limits>
#include <optional>
#include <string>

#include "wfollow/geometry.hpp"
#include "wfollow/world.hpp"

namespace wfollow::apf {

/// Potential-field gains and the arbitration thresholds around them.
struct ApfParams {
  double k_att{1.0};
  double k_rep{0.5};
  /// Obstacle influence distance, measured from the robot surface.
  double rho0{1.5};
  double force_cap{5.0};
  /// Clearance below which the field starts to take over from following.
  double blend_distance{2.0};
  double local_min_epsilon{0.05};
  double goal_radius{2.0};
  /// Force-to-velocity gains.
  double k_v{1.0};
  double k_omega{3.0};

  bool valid() const {
    return k_att > 0 && k_rep > 0 && rho0 > 0 && force_cap > 0 && blend_distance > 0 &&
           local_min_epsilon > 0 && goal_radius > 0 && k_v > 0 && k_omega > 0;
  }
  friend bool operator==(const ApfParams&, const ApfParams&) = default;
};

struct ForceResult {
  Vec2 attractive;
  Vec2 repulsive;
  Vec2 resultant;
  double nearest_obstacle_distance{std::numeric_limits<double>::infinity()};
  bool local_minimum_flag{false};
};

/// Smallest rho used in the repulsive law.
inline constexpr double kMinRho = 1e-6;

/// -grad of 0.5 * k_att * |goal - robot|^2.
Vec2 attractive_force(Vec2 robot, Vec2 goal, double k_att);
double attractive_potential(Vec2 robot, Vec2 goal, double k_att);

/// -grad of 0.5 * k_rep * (1/rho - 1/rho0)^2, pointing from the obstacle
/// point toward the robot; zero for rho >= rho0.
Vec2 repulsive_force(Vec2 robot, Vec2 obstacle_point, double rho, double k_rep, double rho0);
double repulsive_potential(double rho, double k_rep, double rho0);

/// Nearest obstacle point and the surface gap rho for one obstacle.
struct ObstacleContact {
  Vec2 point;
  double rho{0.0};
};
ObstacleContact shelf_contact(Vec2 robot, double robot_radius, const world::Shelf& shelf);
ObstacleContact disc_contact(Vec2 robot, double robot_radius, Vec2 center, double disc_radius);

/// Attraction toward `goal` plus repulsion from every shelf and every
/// active pedestrian except `exclude_id`. The resultant is capped.
ForceResult total_force(const world::WorldState& world, Vec2 goal, const std::optional<std::string>& exclude_id,
                        const ApfParams& params);

/// Potential whose negative gradient is the uncapped total force.
double total_potential(const world::WorldState& world, Vec2 goal, const std::optional<std::string>& exclude_id,
                       const ApfParams& params);

world::Twist force_to_twist(Vec2 force, double robot_heading, const ApfParams& params,
                            const world::RobotPlant& plant);

/// Follow command far from obstacles, field command close to them, and a
/// linear mix in between.
world::Twist blend(const world::Twist& follow_cmd, const world::Twist& apf_cmd, double nearest_clearance,
                   const ApfParams& params);

}  // namespace wfollow::apf
