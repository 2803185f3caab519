#pragma once

#include <optional>
#include <span>

#include "wfollow/sensor.hpp"
#include "wfollow/tracker.hpp"
#include "wfollow/world.hpp"

namespace wfollow::follow {

using CommandTwist = world::Twist;

enum class LockState { Unlocked, Locked, Searching };
const char* to_string(LockState s);

struct TargetLock {
  std::optional<int> locked_track_id;
  double last_u{0.0};
  double last_width{0.0};
  double last_height{0.0};
  double last_depth{0.0};
  int frames_lost{0};
  LockState state{LockState::Unlocked};
  /// Set on the transition to Unlocked after the search gave up.
  bool loss_event{false};
  /// Set when the lock adopted a different track id this frame.
  bool reacquired{false};
};

struct FollowParams {
  double center_deadband{20.0};
  double desired_distance{1.5};
  double distance_deadband{0.2};
  double k_linear{1.2};
  double max_speed{1.2};
  double turn_rate{0.8};
  double width_tolerance{0.3};
  double center_tolerance{80.0};
  int search_patience{30};

  bool valid() const {
    return center_deadband > 0 && desired_distance > 0 && distance_deadband >= 0 && k_linear >= 0 &&
           max_speed >= 0 && turn_rate >= 0 && width_tolerance > 0 && center_tolerance > 0 &&
           search_patience >= 0;
  }
  friend bool operator==(const FollowParams&, const FollowParams&) = default;
};

enum class TurnDirection { Left, Straight, Right };

/// One visible confirmed track as seen by the follower.
struct Candidate {
  int track_id{0};
  double u{0.0};
  double width{0.0};
  double height{0.0};
  double depth{0.0};
};

/// Confirmed tracks matched to a detection this frame, with the matched
/// detection's box and depth.
std::vector<Candidate> visible_confirmed(const tracker::FrameResult& frame,
                                         std::span<const sensor::Detection> detections);

/// Locks the candidate nearest the image center; ties go to the smaller id.
TargetLock acquire_target(std::span<const Candidate> confirmed, double image_width);

/// Bang-bang steering with an inclusive pixel deadband around the center.
TurnDirection steer(double u_center, double image_width, const FollowParams& params);

/// Proportional distance keeping; zero inside the inclusive deadband.
double speed(double depth, const FollowParams& params);

/// Width- and position-gated reacquisition among `candidates`; returns the
/// chosen candidate's index or nothing.
std::optional<std::size_t> choose_reacquisition(const TargetLock& lock, std::span<const Candidate> candidates,
                                                const FollowParams& params);

TargetLock update_lock(const TargetLock& lock, const tracker::FrameResult& frame,
                       std::span<const sensor::Detection> detections, const FollowParams& params);

CommandTwist follow_command(const TargetLock& lock, const FollowParams& params, TurnDirection turn);

}  // namespace wfollow::follow
