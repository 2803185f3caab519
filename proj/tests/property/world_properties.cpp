#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "wfollow/rng.hpp"
#include "wfollow/world.hpp"

using namespace wfollow;
using namespace wfollow::world;
using doctest::Approx;

namespace {

double in_range(CounterRng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

}  // namespace

TEST_CASE("quarter-turn arc example against fine Euler") {
  const double dt = std::numbers::pi / 2;
  const Pose2D p = step_unicycle({0, 0, 0}, 1.0, 1.0, dt);
  const auto ref = oracle::euler_unicycle({0, 0, 0}, 1.0, 1.0, dt, 100000);
  CHECK(p.x == Approx(1.0));
  CHECK(p.y == Approx(1.0));
  CHECK(p.theta == Approx(dt));
  CHECK(std::hypot(p.x - ref.x, p.y - ref.y) < 1e-4);
}

TEST_CASE("straight motion keeps the heading and turning in place keeps the position, exactly") {
  CounterRng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Pose2D start{in_range(rng, -10, 10), in_range(rng, -10, 10), wrap_angle(in_range(rng, -4, 4))};
    const Pose2D straight = step_unicycle(start, in_range(rng, 0, 2), 0.0, in_range(rng, 0.01, 0.5));
    CHECK(straight.theta == start.theta);
    const Pose2D spin = step_unicycle(start, 0.0, in_range(rng, -3, 3), in_range(rng, 0.01, 0.5));
    CHECK(spin.x == start.x);
    CHECK(spin.y == start.y);
  }
}

TEST_CASE("arc error shrinks like 1/N against Euler") {
  CounterRng rng(2);
  for (int i = 0; i < 50; ++i) {
    const double v = in_range(rng, 0, 2);
    const double w = in_range(rng, -2, 2);
    const double dt = in_range(rng, 0.05, 0.5);
    const Pose2D exact = step_unicycle({0, 0, 0.3}, v, w, dt);
    auto err = [&](long n) {
      const auto e = oracle::euler_unicycle({0, 0, 0.3}, v, w, dt, n);
      return std::hypot(exact.x - e.x, exact.y - e.y);
    };
    const double e100 = err(100);
    const double e1000 = err(1000);
    CHECK(e1000 <= e100 * 0.11 + 1e-12);
    CHECK(e100 <= std::abs(v * w) * dt * dt / 100.0 + 1e-12);
  }
}

TEST_CASE("clearance examples") {
  const std::vector<Shelf> one{{1, -1, 2, 1}};
  CHECK(clearance({0, 0}, one) == Approx(1.0));
  CHECK(clearance({1.5, 0}, one) == 0.0);
  const std::vector<Shelf> corner{{3, 4, 5, 6}};
  CHECK(clearance({0, 0}, corner) == Approx(5.0));
}

TEST_CASE("clearance is 1-Lipschitz") {
  CounterRng rng(3);
  const std::vector<Shelf> shelves{{1, 1, 3, 2}, {-4, -2, -1, 5}, {5, -5, 6, 0}};
  for (int i = 0; i < 5000; ++i) {
    const Vec2 p{in_range(rng, -8, 8), in_range(rng, -8, 8)};
    const Vec2 q{in_range(rng, -8, 8), in_range(rng, -8, 8)};
    CHECK(std::abs(clearance(p, shelves) - clearance(q, shelves)) <= distance(p, q) + 1e-12);
  }
}

TEST_CASE("pedestrian walking examples") {
  Pedestrian p;
  p.position = {0, 0};
  p.speed = 1.0;
  p.waypoints = {{10, 0}};
  CHECK(advance_pedestrian(p, 0.5).position == Vec2{0.5, 0.0});

  p.position = {9.9, 0};
  const Pedestrian arrived = advance_pedestrian(p, 0.5);
  CHECK(arrived.position == Vec2{10.0, 0.0});
  CHECK(arrived.finished());
  CHECK(advance_pedestrian(arrived, 3.0).position == Vec2{10.0, 0.0});
}

TEST_CASE("walked distance equals speed times time until the last waypoint") {
  CounterRng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    Pedestrian p;
    p.position = {in_range(rng, -5, 5), in_range(rng, -5, 5)};
    p.speed = in_range(rng, 0.2, 2.0);
    double route = 0.0;
    Vec2 last = p.position;
    const int n = 1 + static_cast<int>(rng.next_u64() % 5);
    for (int k = 0; k < n; ++k) {
      const Vec2 w{in_range(rng, -5, 5), in_range(rng, -5, 5)};
      route += distance(last, w);
      last = w;
      p.waypoints.push_back(w);
    }
    const double dt = in_range(rng, 0.01, 0.2);
    double walked = 0.0;
    double elapsed = 0.0;
    while (!p.finished() && elapsed < 1000.0) {
      const Vec2 before = p.position;
      p = advance_pedestrian(p, dt);
      walked += distance(before, p.position);
      elapsed += dt;
    }
    CHECK(p.finished());
    CHECK(walked == Approx(route).epsilon(1e-9));
    // The walk ends within one step of speed * elapsed; snapping shortens
    // a step at every waypoint, so allow one step per waypoint.
    CHECK(walked <= p.speed * elapsed + 1e-9);
    CHECK(walked >= p.speed * elapsed - n * p.speed * dt - 1e-9);
  }
}

TEST_CASE("collision thresholds") {
  WorldState w;
  w.bounds = {-5, -5, 5, 5};
  w.robot.radius = 0.3;
  w.shelves = {{0.5, -1, 1, 1}};
  w.robot.pose = {0.0, 0.0, 0.0};
  auto r = check_collision(w);
  CHECK_FALSE(r.any());
  CHECK(r.min_clearance == Approx(0.5));
  w.robot.pose = {0.3, 0.0, 0.0};
  CHECK(check_collision(w).shelf_collision);

  w.shelves.clear();
  w.robot.pose = {0.0, 0.0, 0.0};
  Pedestrian p;
  p.position = {0.5, 0.0};
  p.shoulder_width = 0.5;
  w.pedestrians = {p};
  CHECK(check_collision(w).pedestrian_collision);
  w.pedestrians[0].position = {0.56, 0.0};
  CHECK_FALSE(check_collision(w).pedestrian_collision);
}

TEST_CASE("heading stays wrapped under any command sequence") {
  CounterRng rng(5);
  Pose2D p{0, 0, 0};
  RobotPlant plant;
  for (int i = 0; i < 10000; ++i) {
    const Twist cmd = clamp_to_plant({in_range(rng, -3, 3), in_range(rng, -10, 10)}, plant);
    CHECK(cmd.v >= 0.0);
    CHECK(cmd.v <= plant.max_speed);
    CHECK(std::abs(cmd.omega) <= plant.max_turn_rate);
    p = step_unicycle(p, cmd.v, cmd.omega, in_range(rng, 0.01, 0.5));
    REQUIRE(p.theta > -std::numbers::pi);
    REQUIRE(p.theta <= std::numbers::pi);
  }
}
