#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "wfollow/geometry.hpp"

namespace wfollow::world {

/// Planar pose; theta is kept in (-pi, pi].
struct Pose2D {
  double x{0.0};
  double y{0.0};
  double theta{0.0};

  Vec2 position() const { return {x, y}; }
  Vec2 heading() const { return {std::cos(theta), std::sin(theta)}; }
  friend bool operator==(const Pose2D&, const Pose2D&) = default;
};

/// Axis-aligned rectangle. Also used for the world bounds.
struct Rect {
  double min_x{0.0};
  double min_y{0.0};
  double max_x{0.0};
  double max_y{0.0};

  bool valid() const { return min_x < max_x && min_y < max_y; }
  bool contains(Vec2 p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
  Vec2 center() const { return {0.5 * (min_x + max_x), 0.5 * (min_y + max_y)}; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

using Shelf = Rect;

struct Pedestrian {
  std::string id;
  Vec2 position;
  double height{1.7};
  double shoulder_width{0.5};
  double speed{1.0};
  std::vector<Vec2> waypoints;
  std::size_t waypoint_index{0};
  double spawn_time{0.0};

  bool active(double t) const { return t >= spawn_time; }
  /// True once the last waypoint has been reached (or there are none).
  bool finished() const {
    return waypoints.empty() ||
           (waypoint_index + 1 == waypoints.size() && position == waypoints.back());
  }
  friend bool operator==(const Pedestrian&, const Pedestrian&) = default;
};

struct RobotPlant {
  Pose2D pose;
  double radius{0.3};
  double max_speed{1.2};
  double max_turn_rate{1.5};
  friend bool operator==(const RobotPlant&, const RobotPlant&) = default;
};

struct WorldState {
  double time{0.0};
  RobotPlant robot;
  std::vector<Pedestrian> pedestrians;
  std::vector<Shelf> shelves;
  Rect bounds{0.0, 0.0, 10.0, 10.0};
};

struct CollisionReport {
  bool shelf_collision{false};
  bool pedestrian_collision{false};
  /// Distance from the robot center to the nearest obstacle surface
  /// (shelf rectangle or active pedestrian disc).
  double min_clearance{std::numeric_limits<double>::infinity()};

  bool any() const { return shelf_collision || pedestrian_collision; }
};

/// Exact arc integration of the unicycle model over one step.
Pose2D step_unicycle(const Pose2D& pose, double v, double omega, double dt);

/// Moves a pedestrian speed*dt toward its current waypoint, snapping on arrival.
Pedestrian advance_pedestrian(Pedestrian p, double dt);

/// Euclidean distance from a point to a rectangle (0 inside).
double clearance(Vec2 point, const Shelf& shelf);
double clearance(Vec2 point, std::span<const Shelf> shelves);

/// Closest point of the rectangle to `point` (the point itself when inside).
Vec2 nearest_point(Vec2 point, const Shelf& shelf);

CollisionReport check_collision(const WorldState& world);

/// Clamps a command to the plant limits. Forward speed is never negative.
struct Twist {
  double v{0.0};
  double omega{0.0};
  friend bool operator==(const Twist&, const Twist&) = default;
};
Twist clamp_to_plant(Twist cmd, const RobotPlant& plant);

}  // namespace wfollow::world
