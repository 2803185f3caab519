#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "wfollow/geometry.hpp"

namespace wfollow::sim {

struct TrackObservation {
  int id{0};
  Box box;
};

struct TruthObservation {
  std::string label;
  Box box;
};

/// Ground-truth label -> track id for one frame.
using Attribution = std::map<std::string, int>;

/// Attributes each track to the truth box with the highest IoU (> 0). When
/// several tracks land on one pedestrian the best-overlapping one wins.
Attribution attribute_tracks(std::span<const TrackObservation> tracks, std::span<const TruthObservation> truths);

/// Number of frames in which a pedestrian's attributed id differs from
/// the id it was last attributed to.
int count_id_switches(std::span<const Attribution> frames);

int count_id_switches(std::span<const std::vector<TrackObservation>> tracks,
                      std::span<const std::vector<TruthObservation>> truths);

/// Longest span (in frames, first to last attribution inclusive) over
/// which `label` was attributed to one unchanged track id.
int longest_single_id_span(std::span<const Attribution> frames, const std::string& label);

}  // namespace wfollow::sim
