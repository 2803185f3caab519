#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wfollow/geometry.hpp"
#include "wfollow/world.hpp"

namespace wfollow::sensor {

/// Forward-facing pinhole RGB-D camera mounted at the robot pose.
struct CameraModel {
  double focal_px{500.0};
  double image_width{640.0};
  double image_height{480.0};
  double max_depth{12.0};
  /// Height of the optical center above the floor.
  double mount_height{0.85};
  /// Fraction of a box's horizontal extent that must be hidden before the
  /// detection is suppressed. Exactly this fraction still shrinks.
  double occlusion_fraction{0.6};

  double horizontal_fov() const;
  bool valid() const {
    return focal_px > 0 && image_width > 0 && image_height > 0 && max_depth > 0 &&
           occlusion_fraction > 0 && occlusion_fraction <= 1;
  }
  friend bool operator==(const CameraModel&, const CameraModel&) = default;
};

struct Detection {
  double u_center{0.0};
  double v_center{0.0};
  double width_px{0.0};
  double height_px{0.0};
  double depth{0.0};
  double confidence{1.0};
  std::vector<double> feature;
  /// Ground-truth pedestrian label; empty for detections of unknown origin.
  std::string source;

  Box box() const { return {u_center, v_center, width_px, height_px}; }
  friend bool operator==(const Detection&, const Detection&) = default;
};

struct NoiseSpec {
  double pixel_sigma{0.0};
  double depth_sigma{0.0};
  double feature_sigma{0.0};
  double miss_rate{0.0};
  std::uint64_t rng_seed{0};
  std::size_t feature_dim{16};

  bool valid() const {
    return pixel_sigma >= 0 && depth_sigma >= 0 && feature_sigma >= 0 && miss_rate >= 0 &&
           miss_rate <= 1 && feature_dim > 0;
  }
  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

/// Camera-frame coordinates of a world point: forward along the optical
/// axis and lateral to the right (image +u direction).
struct CameraPoint {
  double forward{0.0};
  double right{0.0};
};
CameraPoint to_camera(const world::Pose2D& robot, Vec2 p);
Vec2 from_camera(const world::Pose2D& robot, CameraPoint c);

/// Deterministic unit vector for a pedestrian label.
std::vector<double> base_feature(const std::string& pedestrian_id, std::size_t dim);

/// Noisy appearance descriptor: normalize(base + N(0, feature_sigma^2 I)).
std::vector<double> synth_feature(const std::string& pedestrian_id, const NoiseSpec& noise,
                                  std::uint64_t frame);

/// Noise-free pinhole projection of every active pedestrian in view.
/// Features are the unperturbed base vectors of `feature_dim` entries.
std::vector<Detection> project(const world::WorldState& world, const CameraModel& camera,
                               std::size_t feature_dim = 16);

/// Suppresses or shrinks detections hidden by nearer pedestrians and shelves.
std::vector<Detection> apply_occlusion(std::span<const Detection> detections,
                                       const world::WorldState& world,
                                       const CameraModel& camera);

/// Gaussian perturbation and random misses keyed on (seed, frame, source).
std::vector<Detection> corrupt(std::span<const Detection> detections, const NoiseSpec& noise,
                               std::uint64_t frame, const CameraModel& camera);

/// Horizontal image interval covered by a shelf's portion nearer than
/// `max_forward`. Returns false when nothing of it is in front of the camera.
bool shelf_interval(const world::Pose2D& robot, const world::Shelf& shelf,
                    const CameraModel& camera, double max_forward, double& lo, double& hi);

}  // namespace wfollow::sensor
