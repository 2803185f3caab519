#include <doctest.h>

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "wfollow/sensor.hpp"

using namespace wfollow;
using namespace wfollow::sensor;
using doctest::Approx;

namespace {

world::Pedestrian person(std::string id, Vec2 at) {
  world::Pedestrian p;
  p.id = std::move(id);
  p.position = at;
  p.height = 1.7;
  p.shoulder_width = 0.5;
  return p;
}

world::WorldState looking_east() {
  world::WorldState w;
  w.bounds = {-20, -20, 20, 20};
  w.robot.pose = {0.0, 0.0, 0.0};
  return w;
}

}  // namespace

TEST_CASE("a person 5 m straight ahead") {
  auto w = looking_east();
  w.pedestrians = {person("p", {5.0, 0.0})};
  const CameraModel cam;
  const auto dets = project(w, cam);
  REQUIRE(dets.size() == 1);
  const auto& d = dets[0];
  CHECK(d.u_center == Approx(320.0));
  CHECK(d.width_px == Approx(50.0));
  CHECK(d.height_px == Approx(170.0));
  CHECK(d.depth == Approx(5.0));
  CHECK(d.v_center - 0.5 * d.height_px == Approx(240.0 - 85.0));
  CHECK(d.source == "p");
  CHECK(d.feature.size() == 16);
}

TEST_CASE("a person to the left appears left of center") {
  auto w = looking_east();
  w.pedestrians = {person("p", {4.0, 1.0})};
  const auto dets = project(w, CameraModel{});
  REQUIRE(dets.size() == 1);
  CHECK(dets[0].u_center == Approx(320.0 - 500.0 * 1.0 / 4.0));
}

TEST_CASE("camera frame round trip") {
  const world::Pose2D robot{1.0, -2.0, 0.9};
  for (Vec2 p : {Vec2{3.0, 4.0}, Vec2{-1.0, 0.5}, Vec2{1.0, -2.5}}) {
    const auto c = to_camera(robot, p);
    const Vec2 back = from_camera(robot, c);
    CHECK(back.x == Approx(p.x));
    CHECK(back.y == Approx(p.y));
  }
}

TEST_CASE("only people inside the frustum are detected") {
  const CameraModel cam;
  const double half = 0.5 * cam.horizontal_fov();
  CHECK(half == Approx(std::atan(320.0 / 500.0)));
  auto w = looking_east();
  int k = 0;
  for (double bearing = -3.0; bearing <= 3.0; bearing += 0.05) {
    for (double range : {0.5, 3.0, 8.0, 11.9, 12.5}) {
      w.pedestrians = {person("p" + std::to_string(k++), {range * std::cos(bearing), range * std::sin(bearing)})};
      const auto dets = project(w, cam);
      const double forward = range * std::cos(bearing);
      const bool inside = forward > 0 && forward <= cam.max_depth && std::abs(bearing) <= half + 1e-12;
      if (!inside) {
        CHECK(dets.empty());
        continue;
      }
      for (const auto& d : dets) {
        CHECK(d.u_center - 0.5 * d.width_px >= -1e-9);
        CHECK(d.u_center + 0.5 * d.width_px <= cam.image_width + 1e-9);
        CHECK(d.v_center - 0.5 * d.height_px >= -1e-9);
        CHECK(d.v_center + 0.5 * d.height_px <= cam.image_height + 1e-9);
        CHECK(d.depth > 0.0);
        CHECK(d.depth <= cam.max_depth);
      }
    }
  }
}

TEST_CASE("inactive pedestrians are invisible") {
  auto w = looking_east();
  w.pedestrians = {person("p", {5.0, 0.0})};
  w.pedestrians[0].spawn_time = 1.0;
  CHECK(project(w, CameraModel{}).empty());
  w.time = 1.0;
  CHECK(project(w, CameraModel{}).size() == 1);
}

TEST_CASE("occlusion suppresses above the fraction and shrinks below it") {
  const CameraModel cam;
  auto w = looking_east();
  SUBCASE("fully behind a nearer person") {
    w.pedestrians = {person("near", {3.0, 0.0}), person("far", {6.0, 0.0})};
    const auto out = apply_occlusion(project(w, cam), w, cam);
    REQUIRE(out.size() == 1);
    CHECK(out[0].source == "near");
  }
  SUBCASE("partially hidden keeps the visible part") {
    // Far box spans [307.5, 332.5]; near box at u = 320 - 500 * 0.3 / 3 = 270 spans [228.3, 311.7].
    w.pedestrians = {person("near", {3.0, 0.3}), person("far", {10.0, 0.0})};
    const auto dets = project(w, cam);
    const auto out = apply_occlusion(dets, w, cam);
    REQUIRE(out.size() == 2);
    const auto& far = out[0].source == "far" ? out[0] : out[1];
    const auto& near = out[0].source == "near" ? out[0] : out[1];
    CHECK(far.u_center - 0.5 * far.width_px == Approx(near.u_center + 0.5 * near.width_px));
    CHECK(far.u_center + 0.5 * far.width_px == Approx(332.5));
  }
}

TEST_CASE("occluded fraction agrees with the interval oracle") {
  const CameraModel cam;
  auto w = looking_east();
  w.shelves = {{4.0, -0.6, 4.5, -0.2}};
  int checked = 0;
  for (double y_far = -1.2; y_far <= 1.2; y_far += 0.07) {
    for (double y_near : {-0.5, 0.1, 0.35}) {
      w.pedestrians = {person("far", {7.0, y_far}), person("near", {3.0, y_near})};
      const auto dets = project(w, cam);
      const Detection* far = nullptr;
      std::vector<std::pair<double, double>> covers;
      for (const auto& d : dets) {
        if (d.source == "far") far = &d;
        else covers.emplace_back(d.u_center - 0.5 * d.width_px, d.u_center + 0.5 * d.width_px);
      }
      if (far == nullptr) continue;
      double lo = 0;
      double hi = 0;
      if (shelf_interval(w.robot.pose, w.shelves[0], cam, far->depth, lo, hi)) covers.emplace_back(lo, hi);
      const double left = far->u_center - 0.5 * far->width_px;
      const double right = far->u_center + 0.5 * far->width_px;
      const double fraction = oracle::covered_length(covers, left, right) / (right - left);

      const auto out = apply_occlusion(dets, w, cam);
      bool kept = false;
      for (const auto& d : out) kept = kept || d.source == "far";
      CHECK(kept == (fraction <= cam.occlusion_fraction));
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("corrupt is the identity without noise") {
  auto w = looking_east();
  w.pedestrians = {person("a", {5.0, 0.5}), person("b", {8.0, -1.0})};
  const CameraModel cam;
  const auto dets = project(w, cam);
  const NoiseSpec quiet;
  CHECK(corrupt(dets, quiet, 17, cam) == dets);
}

TEST_CASE("corrupt is reproducible and keyed on the frame") {
  auto w = looking_east();
  w.pedestrians = {person("a", {5.0, 0.5})};
  const CameraModel cam;
  const auto dets = project(w, cam);
  NoiseSpec noise;
  noise.pixel_sigma = 2.0;
  noise.depth_sigma = 0.05;
  noise.feature_sigma = 0.1;
  noise.rng_seed = 99;
  CHECK(corrupt(dets, noise, 4, cam) == corrupt(dets, noise, 4, cam));
  CHECK_FALSE(corrupt(dets, noise, 4, cam) == corrupt(dets, noise, 5, cam));

  noise.miss_rate = 1.0;
  CHECK(corrupt(dets, noise, 4, cam).empty());
}

TEST_CASE("features are unit vectors that separate identities") {
  NoiseSpec noise;
  noise.feature_sigma = 0.1;
  noise.rng_seed = 3;
  const auto a = synth_feature("alice", noise, 1);
  const auto a2 = synth_feature("alice", noise, 2);
  const auto b = synth_feature("bob", noise, 1);
  auto dotp = [](const auto& x, const auto& y) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
  };
  CHECK(dotp(a, a) == Approx(1.0));
  CHECK(dotp(a, a2) > 0.8);
  CHECK(dotp(a, b) < 0.8);
}
