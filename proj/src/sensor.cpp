#include "wfollow/sensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "wfollow/rng.hpp"

namespace wfollow::sensor {
namespace {

constexpr double kNearPlane = 1e-3;
constexpr std::uint64_t kFeatureSalt = 0x6665617475726573ULL;

void normalize(std::vector<double>& v) {
  double n2 = 0.0;
  for (double x : v) n2 += x * x;
  const double n = std::sqrt(n2);
  for (double& x : v) x /= n;
}

struct Interval {
  double lo;
  double hi;
};

// Length of `target` covered by the union of `covers`, plus the widest
// uncovered piece of `target`.
double covered_length(Interval target, std::vector<Interval> covers, Interval& widest_gap) {
  std::sort(covers.begin(), covers.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
  double covered = 0.0;
  double cursor = target.lo;
  widest_gap = {target.lo, target.lo};
  auto consider_gap = [&](double lo, double hi) {
    if (hi - lo > widest_gap.hi - widest_gap.lo) widest_gap = {lo, hi};
  };
  for (const auto& c : covers) {
    const double lo = std::max(c.lo, target.lo);
    const double hi = std::min(c.hi, target.hi);
    if (hi <= lo) continue;
    if (lo > cursor) {
      consider_gap(cursor, lo);
      covered += hi - lo;
      cursor = hi;
    } else if (hi > cursor) {
      covered += hi - cursor;
      cursor = hi;
    }
  }
  if (cursor < target.hi) consider_gap(cursor, target.hi);
  return covered;
}

// Sutherland-Hodgman clip of a polygon in (forward, right) coordinates
// against forward >= bound (keep_greater) or forward <= bound.
std::vector<CameraPoint> clip_forward(const std::vector<CameraPoint>& poly, double bound,
                                      bool keep_greater) {
  std::vector<CameraPoint> out;
  if (poly.empty()) return out;
  auto inside = [&](const CameraPoint& p) {
    return keep_greater ? p.forward >= bound : p.forward <= bound;
  };
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const CameraPoint& a = poly[i];
    const CameraPoint& b = poly[(i + 1) % poly.size()];
    const bool ina = inside(a);
    const bool inb = inside(b);
    if (ina) out.push_back(a);
    if (ina != inb) {
      const double t = (bound - a.forward) / (b.forward - a.forward);
      out.push_back({bound, a.right + t * (b.right - a.right)});
    }
  }
  return out;
}

}  // namespace

double CameraModel::horizontal_fov() const { return 2.0 * std::atan(image_width / (2.0 * focal_px)); }

CameraPoint to_camera(const world::Pose2D& robot, Vec2 p) {
  const Vec2 d = p - robot.position();
  const double c = std::cos(robot.theta);
  const double s = std::sin(robot.theta);
  // Right of the heading is the image +u direction.
  return {c * d.x + s * d.y, s * d.x - c * d.y};
}

Vec2 from_camera(const world::Pose2D& robot, CameraPoint p) {
  const double c = std::cos(robot.theta);
  const double s = std::sin(robot.theta);
  return {robot.x + c * p.forward + s * p.right, robot.y + s * p.forward - c * p.right};
}

std::vector<double> base_feature(const std::string& pedestrian_id, std::size_t dim) {
  CounterRng rng(fnv1a64(pedestrian_id));
  std::vector<double> f(dim);
  for (double& x : f) x = rng.normal();
  normalize(f);
  return f;
}

std::vector<double> synth_feature(const std::string& pedestrian_id, const NoiseSpec& noise,
                                  std::uint64_t frame) {
  std::vector<double> f = base_feature(pedestrian_id, noise.feature_dim);
  if (noise.feature_sigma <= 0.0) return f;
  CounterRng rng(noise.rng_seed, frame, fnv1a64(pedestrian_id) ^ kFeatureSalt);
  for (double& x : f) x += noise.feature_sigma * rng.normal();
  normalize(f);
  return f;
}

std::vector<Detection> project(const world::WorldState& world, const CameraModel& camera,
                               std::size_t feature_dim) {
  std::vector<Detection> out;
  const double cx = 0.5 * camera.image_width;
  const double cy = 0.5 * camera.image_height;
  const double half_tan = cx / camera.focal_px;
  for (const auto& p : world.pedestrians) {
    if (!p.active(world.time)) continue;
    const CameraPoint c = to_camera(world.robot.pose, p.position);
    if (c.forward <= 0.0 || c.forward > camera.max_depth) continue;
    if (std::abs(c.right / c.forward) > half_tan) continue;

    const double f = camera.focal_px / c.forward;
    const double u = cx + f * c.right;
    const double half_w = 0.5 * f * p.shoulder_width;
    const double left = std::max(0.0, u - half_w);
    const double right = std::min(camera.image_width, u + half_w);
    const double top = std::max(0.0, cy - f * (p.height - camera.mount_height));
    const double bottom = std::min(camera.image_height, cy + f * camera.mount_height);
    if (right <= left || bottom <= top) continue;

    Detection d;
    d.u_center = 0.5 * (left + right);
    d.v_center = 0.5 * (top + bottom);
    d.width_px = right - left;
    d.height_px = bottom - top;
    d.depth = c.forward;
    d.confidence = 1.0;
    d.feature = base_feature(p.id, feature_dim);
    d.source = p.id;
    out.push_back(std::move(d));
  }
  return out;
}

bool shelf_interval(const world::Pose2D& robot, const world::Shelf& shelf,
                    const CameraModel& camera, double max_forward, double& lo, double& hi) {
  std::vector<CameraPoint> poly = {
      to_camera(robot, {shelf.min_x, shelf.min_y}),
      to_camera(robot, {shelf.max_x, shelf.min_y}),
      to_camera(robot, {shelf.max_x, shelf.max_y}),
      to_camera(robot, {shelf.min_x, shelf.max_y}),
  };
  poly = clip_forward(poly, kNearPlane, true);
  poly = clip_forward(poly, max_forward, false);
  if (poly.empty()) return false;
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  const double cx = 0.5 * camera.image_width;
  for (const auto& p : poly) {
    const double u = cx + camera.focal_px * p.right / p.forward;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  return hi > lo;
}

std::vector<Detection> apply_occlusion(std::span<const Detection> detections,
                                       const world::WorldState& world,
                                       const CameraModel& camera) {
  std::vector<Detection> out;
  out.reserve(detections.size());
  for (const auto& d : detections) {
    const Interval self{d.u_center - 0.5 * d.width_px, d.u_center + 0.5 * d.width_px};
    std::vector<Interval> covers;
    for (const auto& other : detections) {
      if (other.depth < d.depth) {
        covers.push_back({other.u_center - 0.5 * other.width_px, other.u_center + 0.5 * other.width_px});
      }
    }
    for (const auto& shelf : world.shelves) {
      double lo = 0.0;
      double hi = 0.0;
      if (shelf_interval(world.robot.pose, shelf, camera, d.depth, lo, hi)) covers.push_back({lo, hi});
    }
    Interval gap{};
    const double covered = covered_length(self, std::move(covers), gap);
    const double fraction = covered / (self.hi - self.lo);
    if (fraction > camera.occlusion_fraction) continue;
    Detection kept = d;
    if (covered > 0.0) {
      kept.u_center = 0.5 * (gap.lo + gap.hi);
      kept.width_px = gap.hi - gap.lo;
      if (kept.width_px <= 0.0) continue;
    }
    out.push_back(std::move(kept));
  }
  return out;
}

std::vector<Detection> corrupt(std::span<const Detection> detections, const NoiseSpec& noise,
                               std::uint64_t frame, const CameraModel& camera) {
  std::vector<Detection> out;
  out.reserve(detections.size());
  for (std::size_t i = 0; i < detections.size(); ++i) {
    const Detection& d = detections[i];
    const std::uint64_t entity = d.source.empty() ? splitmix64(i) : fnv1a64(d.source);
    CounterRng rng(noise.rng_seed, frame, entity);
    if (rng.uniform() < noise.miss_rate) continue;

    Detection n = d;
    const double du = rng.normal();
    const double dv = rng.normal();
    const double dw = rng.normal();
    const double dh = rng.normal();
    const double dd = rng.normal();
    if (noise.pixel_sigma > 0.0) {
      n.u_center = std::clamp(d.u_center + noise.pixel_sigma * du, 0.0, camera.image_width);
      n.v_center = std::clamp(d.v_center + noise.pixel_sigma * dv, 0.0, camera.image_height);
      n.width_px = std::max(1.0, d.width_px + noise.pixel_sigma * dw);
      n.height_px = std::max(1.0, d.height_px + noise.pixel_sigma * dh);
    }
    if (noise.depth_sigma > 0.0) n.depth = std::max(0.05, d.depth + noise.depth_sigma * dd);
    if (noise.feature_sigma > 0.0 && !d.source.empty()) {
      n.feature = synth_feature(d.source, noise, frame);
    }
    out.push_back(std::move(n));
  }
  return out;
}

}  // namespace wfollow::sensor
