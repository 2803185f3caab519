#include "wfollow/metrics.hpp"

#include <algorithm>

namespace wfollow::sim {

Attribution attribute_tracks(std::span<const TrackObservation> tracks, std::span<const TruthObservation> truths) {
  struct Best {
    int id;
    double iou;
  };
  std::map<std::string, Best> best;
  for (const auto& t : tracks) {
    const TruthObservation* match = nullptr;
    double match_iou = 0.0;
    for (const auto& g : truths) {
      const double o = iou(t.box, g.box);
      if (o > match_iou) {
        match_iou = o;
        match = &g;
      }
    }
    if (match == nullptr) continue;
    auto it = best.find(match->label);
    if (it == best.end() || match_iou > it->second.iou ||
        (match_iou == it->second.iou && t.id < it->second.id)) {
      best[match->label] = {t.id, match_iou};
    }
  }
  Attribution out;
  for (const auto& [label, b] : best) out[label] = b.id;
  return out;
}

int count_id_switches(std::span<const Attribution> frames) {
  std::map<std::string, int> last;
  int switches = 0;
  for (const auto& frame : frames) {
    for (const auto& [label, id] : frame) {
      auto it = last.find(label);
      if (it != last.end() && it->second != id) ++switches;
      last[label] = id;
    }
  }
  return switches;
}

int count_id_switches(std::span<const std::vector<TrackObservation>> tracks,
                      std::span<const std::vector<TruthObservation>> truths) {
  std::vector<Attribution> frames;
  const std::size_t n = std::min(tracks.size(), truths.size());
  frames.reserve(n);
  for (std::size_t i = 0; i < n; ++i) frames.push_back(attribute_tracks(tracks[i], truths[i]));
  return count_id_switches(frames);
}

int longest_single_id_span(std::span<const Attribution> frames, const std::string& label) {
  int best = 0;
  int current_id = 0;
  long start = -1;
  long last_seen = -1;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    auto it = frames[f].find(label);
    if (it == frames[f].end()) continue;
    const long fi = static_cast<long>(f);
    if (start < 0 || it->second != current_id) {
      start = fi;
      current_id = it->second;
    }
    last_seen = fi;
    best = std::max(best, static_cast<int>(last_seen - start + 1));
  }
  return best;
}

}  // namespace wfollow::sim
