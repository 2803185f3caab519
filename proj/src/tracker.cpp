#include "wfollow/tracker.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace wfollow::tracker {

const char* to_string(TrackStage stage) {
  switch (stage) {
    case TrackStage::Tentative:
      return "tentative";
    case TrackStage::Confirmed:
      return "confirmed";
    case TrackStage::Deleted:
      return "deleted";
  }
  return "unknown";
}

bool FrameResult::assigned(int track_id) const { return detection_for(track_id) >= 0; }

long FrameResult::detection_for(int track_id) const {
  for (const auto& [id, det] : assignments) {
    if (id == track_id) return static_cast<long>(det);
  }
  return -1;
}

double appearance_cost(const Track& track, std::span<const double> feature) {
  if (track.gallery.empty()) throw std::logic_error("appearance_cost: empty gallery");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : track.gallery) {
    double d = 0.0;
    const std::size_t n = std::min(g.size(), feature.size());
    for (std::size_t k = 0; k < n; ++k) d += g[k] * feature[k];
    best = std::min(best, 1.0 - d);
  }
  return std::clamp(best, 0.0, 2.0);
}

namespace {

// Solve one assignment over the given subsets and fold the result into
// `matches`, removing matched detections from `free_dets`.
template <typename CostFn>
std::vector<std::size_t> match_subset(const std::vector<std::size_t>& track_idx,
                                      std::vector<std::size_t>& free_dets, Matching& matches,
                                      CostFn&& cost_fn) {
  if (track_idx.empty() || free_dets.empty()) return track_idx;
  Eigen::MatrixXd cost(static_cast<Eigen::Index>(track_idx.size()),
                       static_cast<Eigen::Index>(free_dets.size()));
  for (std::size_t r = 0; r < track_idx.size(); ++r) {
    for (std::size_t c = 0; c < free_dets.size(); ++c) {
      cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cost_fn(track_idx[r], free_dets[c]);
    }
  }
  const Matching m = solve_assignment(cost);
  std::vector<char> row_used(track_idx.size(), 0);
  std::vector<char> col_used(free_dets.size(), 0);
  for (const auto& [r, c] : m) {
    matches.emplace_back(track_idx[r], free_dets[c]);
    row_used[r] = 1;
    col_used[c] = 1;
  }
  std::vector<std::size_t> unmatched;
  for (std::size_t r = 0; r < track_idx.size(); ++r) {
    if (!row_used[r]) unmatched.push_back(track_idx[r]);
  }
  std::vector<std::size_t> remaining;
  for (std::size_t c = 0; c < free_dets.size(); ++c) {
    if (!col_used[c]) remaining.push_back(free_dets[c]);
  }
  free_dets = std::move(remaining);
  return unmatched;
}

}  // namespace

MatchResult cascade_match(std::span<const Track> tracks, std::span<const sensor::Detection> detections,
                          const TrackerParams& params) {
  MatchResult result;
  std::vector<std::size_t> free_dets(detections.size());
  for (std::size_t i = 0; i < free_dets.size(); ++i) free_dets[i] = i;

  std::vector<Vector4> measurements;
  measurements.reserve(detections.size());
  for (const auto& d : detections) measurements.push_back(to_measurement(d.box()));

  auto appearance = [&](std::size_t t, std::size_t d) {
    const Track& track = tracks[t];
    const GateResult g = gate(track.state, measurements[d], params);
    if (!g.passes) return kInfeasible;
    const double app = appearance_cost(track, detections[d].feature);
    if (app > params.appearance_threshold) return kInfeasible;
    return params.lambda_motion * g.squared_mahalanobis + (1.0 - params.lambda_motion) * app;
  };

  std::vector<std::size_t> unmatched_confirmed;
  for (int level = 0; level <= params.max_age; ++level) {
    if (free_dets.empty()) break;
    std::vector<std::size_t> tier;
    for (std::size_t t = 0; t < tracks.size(); ++t) {
      if (tracks[t].confirmed() && tracks[t].time_since_update == level) tier.push_back(t);
    }
    const auto left = match_subset(tier, free_dets, result.matches, appearance);
    unmatched_confirmed.insert(unmatched_confirmed.end(), left.begin(), left.end());
  }
  // Confirmed tracks never reached by the cascade stay unmatched.
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    if (!tracks[t].confirmed()) continue;
    const bool matched = std::any_of(result.matches.begin(), result.matches.end(),
                                     [t](const auto& m) { return m.first == t; });
    const bool listed = std::find(unmatched_confirmed.begin(), unmatched_confirmed.end(), t) !=
                        unmatched_confirmed.end();
    if (!matched && !listed) unmatched_confirmed.push_back(t);
  }

  std::vector<std::size_t> iou_candidates;
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    if (tracks[t].stage == TrackStage::Tentative) iou_candidates.push_back(t);
  }
  for (std::size_t t : unmatched_confirmed) {
    if (tracks[t].time_since_update == 0) {
      iou_candidates.push_back(t);
    } else {
      result.unmatched_tracks.push_back(t);
    }
  }
  std::sort(iou_candidates.begin(), iou_candidates.end());

  const double max_iou_cost = 1.0 - params.iou_threshold;
  auto iou_cost = [&](std::size_t t, std::size_t d) {
    const double c = 1.0 - iou(tracks[t].box(), detections[d].box());
    return c > max_iou_cost ? kInfeasible : c;
  };
  const auto left = match_subset(iou_candidates, free_dets, result.matches, iou_cost);
  result.unmatched_tracks.insert(result.unmatched_tracks.end(), left.begin(), left.end());

  std::sort(result.matches.begin(), result.matches.end());
  std::sort(result.unmatched_tracks.begin(), result.unmatched_tracks.end());
  result.unmatched_detections = std::move(free_dets);
  return result;
}

Tracker::Tracker(TrackerParams params) : params_(params) {}

FrameResult Tracker::step(std::span<const sensor::Detection> detections) {
  for (auto& t : tracks_) {
    t.state = kf_predict(t.state, params_);
    ++t.age;
  }

  const MatchResult m = cascade_match(tracks_, detections, params_);
  FrameResult result;

  for (const auto& [ti, di] : m.matches) {
    Track& t = tracks_[ti];
    const auto& det = detections[di];
    t.state = kf_update(t.state, to_measurement(det.box()), params_);
    ++t.hits;
    t.time_since_update = 0;
    t.gallery.push_back(det.feature);
    while (t.gallery.size() > params_.gallery_size) t.gallery.pop_front();
    if (t.stage == TrackStage::Tentative && t.hits >= params_.n_init) t.stage = TrackStage::Confirmed;
    result.assignments.emplace_back(t.id, di);
  }
  for (std::size_t ti : m.unmatched_tracks) {
    Track& t = tracks_[ti];
    ++t.time_since_update;
    if (t.stage == TrackStage::Tentative || t.time_since_update > params_.max_age) {
      t.stage = TrackStage::Deleted;
    }
  }
  for (std::size_t di : m.unmatched_detections) {
    const auto& det = detections[di];
    Track t;
    t.id = next_id_++;
    t.state = kf_initiate(to_measurement(det.box()));
    t.stage = params_.n_init <= 1 ? TrackStage::Confirmed : TrackStage::Tentative;
    t.gallery.push_back(det.feature);
    result.new_track_ids.push_back(t.id);
    result.assignments.emplace_back(t.id, di);
    tracks_.push_back(std::move(t));
  }

  for (const auto& t : tracks_) {
    if (t.stage == TrackStage::Deleted) result.deleted_track_ids.push_back(t.id);
  }
  std::erase_if(tracks_, [](const Track& t) { return t.stage == TrackStage::Deleted; });

  for (const auto& t : tracks_) {
    if (t.confirmed()) result.confirmed.push_back({t.id, t.box(), t.time_since_update});
  }
  std::sort(result.assignments.begin(), result.assignments.end());
  return result;
}

}  // namespace wfollow::tracker
