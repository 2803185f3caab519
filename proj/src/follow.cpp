#include "wfollow/follow.hpp"

#include <algorithm>
#include <cmath>

namespace wfollow::follow {

const char* to_string(LockState s) {
  switch (s) {
    case LockState::Unlocked:
      return "unlocked";
    case LockState::Locked:
      return "locked";
    case LockState::Searching:
      return "searching";
  }
  return "unknown";
}

std::vector<Candidate> visible_confirmed(const tracker::FrameResult& frame,
                                         std::span<const sensor::Detection> detections) {
  std::vector<Candidate> out;
  for (const auto& snap : frame.confirmed) {
    if (snap.time_since_update != 0) continue;
    const long d = frame.detection_for(snap.id);
    if (d < 0) continue;
    const auto& det = detections[static_cast<std::size_t>(d)];
    out.push_back({snap.id, det.u_center, det.width_px, det.height_px, det.depth});
  }
  return out;
}

namespace {

void refresh(TargetLock& lock, const Candidate& c) {
  lock.locked_track_id = c.track_id;
  lock.last_u = c.u;
  lock.last_width = c.width;
  lock.last_height = c.height;
  lock.last_depth = c.depth;
  lock.frames_lost = 0;
  lock.state = LockState::Locked;
}

}  // namespace

TargetLock acquire_target(std::span<const Candidate> confirmed, double image_width) {
  TargetLock lock;
  const Candidate* best = nullptr;
  const double center = 0.5 * image_width;
  for (const auto& c : confirmed) {
    if (best == nullptr) {
      best = &c;
      continue;
    }
    const double e = std::abs(c.u - center);
    const double be = std::abs(best->u - center);
    if (e < be || (e == be && c.track_id < best->track_id)) best = &c;
  }
  if (best != nullptr) refresh(lock, *best);
  return lock;
}

TurnDirection steer(double u_center, double image_width, const FollowParams& params) {
  const double error = u_center - 0.5 * image_width;
  if (error < -params.center_deadband) return TurnDirection::Left;
  if (error > params.center_deadband) return TurnDirection::Right;
  return TurnDirection::Straight;
}

double speed(double depth, const FollowParams& params) {
  const double error = depth - params.desired_distance;
  if (error <= params.distance_deadband) return 0.0;
  return std::clamp(params.k_linear * error, 0.0, params.max_speed);
}

std::optional<std::size_t> choose_reacquisition(const TargetLock& lock, std::span<const Candidate> candidates,
                                                const FollowParams& params) {
  if (lock.last_width <= 0.0) return std::nullopt;
  std::optional<std::size_t> best;
  double best_ratio = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    if (lock.locked_track_id && c.track_id == *lock.locked_track_id) continue;
    const double ratio = std::abs(c.width - lock.last_width) / lock.last_width;
    if (ratio > params.width_tolerance) continue;
    if (std::abs(c.u - lock.last_u) > params.center_tolerance) continue;
    if (!best || ratio < best_ratio || (ratio == best_ratio && c.track_id < candidates[*best].track_id)) {
      best = i;
      best_ratio = ratio;
    }
  }
  return best;
}

TargetLock update_lock(const TargetLock& lock, const tracker::FrameResult& frame,
                       std::span<const sensor::Detection> detections, const FollowParams& params) {
  TargetLock next = lock;
  next.loss_event = false;
  next.reacquired = false;
  if (lock.state == LockState::Unlocked || !lock.locked_track_id) return next;

  const auto candidates = visible_confirmed(frame, detections);
  const long own = frame.detection_for(*lock.locked_track_id);
  if (own >= 0) {
    const auto& det = detections[static_cast<std::size_t>(own)];
    refresh(next, {*lock.locked_track_id, det.u_center, det.width_px, det.height_px, det.depth});
    return next;
  }

  next.frames_lost = lock.frames_lost + 1;
  next.state = LockState::Searching;
  if (const auto pick = choose_reacquisition(lock, candidates, params)) {
    refresh(next, candidates[*pick]);
    next.reacquired = true;
    return next;
  }
  if (next.frames_lost > params.search_patience) {
    next = TargetLock{};
    next.loss_event = true;
  }
  return next;
}

CommandTwist follow_command(const TargetLock& lock, const FollowParams& params, TurnDirection turn) {
  if (lock.state != LockState::Locked) return {0.0, 0.0};
  CommandTwist cmd;
  cmd.v = speed(lock.last_depth, params);
  switch (turn) {
    case TurnDirection::Left:
      cmd.omega = params.turn_rate;
      break;
    case TurnDirection::Right:
      cmd.omega = -params.turn_rate;
      break;
    case TurnDirection::Straight:
      cmd.omega = 0.0;
      break;
  }
  return cmd;
}

}  // namespace wfollow::follow
