#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "wfollow/assignment.hpp"
#include "wfollow/geometry.hpp"
#include "wfollow/sensor.hpp"

namespace wfollow::tracker {

using Vector4 = Eigen::Matrix<double, 4, 1>;
using Matrix4 = Eigen::Matrix<double, 4, 4>;
using Vector8 = Eigen::Matrix<double, 8, 1>;
using Matrix8 = Eigen::Matrix<double, 8, 8>;

/// 0.95 quantile of the chi-square distribution with 4 degrees of freedom.
inline constexpr double kChi2Gate95Dof4 = 9.4877;

struct TrackerParams {
  int n_init{3};
  int max_age{30};
  double gating_threshold{kChi2Gate95Dof4};
  double appearance_threshold{0.4};
  double lambda_motion{0.0};
  double iou_threshold{0.3};
  std::size_t gallery_size{50};
  /// Multipliers on the height-scaled process and measurement noise.
  double process_noise_scale{1.0};
  double measurement_noise_scale{1.0};

  bool valid() const {
    return n_init >= 1 && max_age >= 0 && gating_threshold > 0 && appearance_threshold > 0 &&
           lambda_motion >= 0 && lambda_motion <= 1 && iou_threshold > 0 && gallery_size > 0 &&
           process_noise_scale > 0 && measurement_noise_scale > 0;
  }
  friend bool operator==(const TrackerParams&, const TrackerParams&) = default;
};

/// Constant-velocity state over (u, v, aspect = w/h, h) and their rates.
struct KalmanState {
  Vector8 mean{Vector8::Zero()};
  Matrix8 covariance{Matrix8::Identity()};
};

struct MeasurementDistribution {
  Vector4 mean;
  Matrix4 covariance;
};

Vector4 to_measurement(const Box& box);
Box to_box(const Vector8& mean);

KalmanState kf_initiate(const Vector4& measurement);
KalmanState kf_predict(const KalmanState& state, const TrackerParams& params);
MeasurementDistribution kf_project(const KalmanState& state, const TrackerParams& params);
/// Throws DegenerateCovariance when the innovation covariance is not SPD.
KalmanState kf_update(const KalmanState& state, const Vector4& measurement, const TrackerParams& params);

/// (x - mean)^T cov^-1 (x - mean) through a Cholesky factor.
double squared_mahalanobis(const Vector4& mean, const Matrix4& covariance, const Vector4& x);

struct GateResult {
  bool passes{false};
  double squared_mahalanobis{0.0};
};
/// Passes iff the squared distance is at most `threshold`.
GateResult gate(const MeasurementDistribution& innovation, const Vector4& measurement, double threshold);
GateResult gate(const KalmanState& state, const Vector4& measurement, const TrackerParams& params);

enum class TrackStage { Tentative, Confirmed, Deleted };
const char* to_string(TrackStage stage);

struct Track {
  int id{0};
  KalmanState state;
  TrackStage stage{TrackStage::Tentative};
  int hits{1};
  int age{1};
  int time_since_update{0};
  std::deque<std::vector<double>> gallery;

  Box box() const { return to_box(state.mean); }
  bool confirmed() const { return stage == TrackStage::Confirmed; }
};

/// Minimum cosine distance from `feature` to the track's gallery.
/// Throws std::logic_error on an empty gallery.
double appearance_cost(const Track& track, std::span<const double> feature);

struct TrackSnapshot {
  int id{0};
  Box box;
  int time_since_update{0};
};

struct FrameResult {
  /// (track id, detection index), including tracks spawned this frame.
  std::vector<std::pair<int, std::size_t>> assignments;
  std::vector<int> new_track_ids;
  std::vector<int> deleted_track_ids;
  /// Confirmed tracks after this frame's update, box from the filtered state.
  std::vector<TrackSnapshot> confirmed;

  bool assigned(int track_id) const;
  /// Detection index matched to `track_id`, or -1.
  long detection_for(int track_id) const;
};

/// Output of the matching stage: indices into the inputs.
struct MatchResult {
  Matching matches;  // (track index, detection index)
  std::vector<std::size_t> unmatched_tracks;
  std::vector<std::size_t> unmatched_detections;
};

/// Matching cascade over confirmed tracks ordered by time since update,
/// then IoU matching for tentative and just-missed tracks. `tracks` must
/// already be predicted to the current frame.
MatchResult cascade_match(std::span<const Track> tracks, std::span<const sensor::Detection> detections,
                          const TrackerParams& params);

class Tracker {
 public:
  explicit Tracker(TrackerParams params = {});

  /// Predict, match, update, and manage lifecycles for one frame.
  FrameResult step(std::span<const sensor::Detection> detections);

  const std::vector<Track>& tracks() const { return tracks_; }
  const TrackerParams& params() const { return params_; }
  int next_id() const { return next_id_; }

 private:
  TrackerParams params_;
  std::vector<Track> tracks_;
  int next_id_{1};
};

}  // namespace wfollow::tracker
