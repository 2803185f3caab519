#include <doctest.h>

#include <vector>

#include "wfollow/metrics.hpp"

using namespace wfollow;
using namespace wfollow::sim;

namespace {

const Box kLeft{200, 240, 50, 170};
const Box kRight{440, 240, 50, 170};

std::vector<TruthObservation> two_people() { return {{"a", kLeft}, {"b", kRight}}; }

}  // namespace

TEST_CASE("attribution takes the best-overlapping track") {
  const std::vector<TrackObservation> tracks{{1, kLeft}, {2, Box{445, 240, 50, 170}}, {3, Box{600, 100, 10, 10}}};
  const Attribution a = attribute_tracks(tracks, two_people());
  CHECK(a.at("a") == 1);
  CHECK(a.at("b") == 2);
  CHECK(a.size() == 2);

  const std::vector<TrackObservation> crowded{{4, Box{210, 240, 50, 170}}, {5, kLeft}};
  CHECK(attribute_tracks(crowded, two_people()).at("a") == 5);
}

TEST_CASE("steady ids give no switches") {
  std::vector<std::vector<TrackObservation>> tracks;
  std::vector<std::vector<TruthObservation>> truths;
  for (int f = 0; f < 10; ++f) {
    tracks.push_back({{1, kLeft}, {2, kRight}});
    truths.push_back(two_people());
  }
  CHECK(count_id_switches(tracks, truths) == 0);
}

TEST_CASE("a new id after a gap counts once") {
  std::vector<Attribution> frames;
  for (int f = 0; f < 5; ++f) frames.push_back({{"a", 1}});
  frames.push_back({});
  frames.push_back({});
  for (int f = 0; f < 5; ++f) frames.push_back({{"a", 7}});
  CHECK(count_id_switches(frames) == 1);
  CHECK(longest_single_id_span(frames, "a") == 5);
}

TEST_CASE("a swap of two ids over ten frames is two switches") {
  std::vector<std::vector<TrackObservation>> tracks;
  std::vector<std::vector<TruthObservation>> truths;
  for (int f = 0; f < 10; ++f) {
    if (f < 5) tracks.push_back({{1, kLeft}, {2, kRight}});
    else tracks.push_back({{2, kLeft}, {1, kRight}});
    truths.push_back(two_people());
  }
  CHECK(count_id_switches(tracks, truths) == 2);
}

TEST_CASE("single-id span counts first to last attribution inclusive") {
  std::vector<Attribution> frames(8);
  frames[1] = {{"a", 3}};
  frames[2] = {{"a", 3}};
  frames[6] = {{"a", 3}};
  CHECK(longest_single_id_span(frames, "a") == 6);
  CHECK(longest_single_id_span(frames, "nobody") == 0);
}
