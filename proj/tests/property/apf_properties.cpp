#include <doctest.h>

#include <cmath>
#include <vector>

#include "wfollow/apf.hpp"
#include "wfollow/rng.hpp"

using namespace wfollow;
using namespace wfollow::apf;

namespace {

double in_range(CounterRng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

world::WorldState random_world(CounterRng& rng) {
  world::WorldState w;
  w.bounds = {-10, -10, 10, 10};
  w.robot.radius = 0.3;
  w.robot.pose = {in_range(rng, -2, 2), in_range(rng, -2, 2), 0.0};
  for (int i = 0; i < 3; ++i) {
    const double x = in_range(rng, -4, 3);
    const double y = in_range(rng, -4, 3);
    w.shelves.push_back({x, y, x + in_range(rng, 0.2, 1.5), y + in_range(rng, 0.2, 1.5)});
  }
  for (int i = 0; i < 2; ++i) {
    world::Pedestrian p;
    p.id = "p" + std::to_string(i);
    p.position = {in_range(rng, -4, 4), in_range(rng, -4, 4)};
    w.pedestrians.push_back(p);
  }
  return w;
}

}  // namespace

TEST_CASE("repulsion is zero beyond rho0 and strictly decreasing inside it") {
  for (double k : {0.1, 0.5, 2.0}) {
    for (double rho0 : {0.5, 1.5, 3.0}) {
      double last = std::numeric_limits<double>::infinity();
      for (double rho = 0.01; rho < rho0; rho += 0.01) {
        const double m = norm(repulsive_force({0, 0}, {-rho, 0}, rho, k, rho0));
        CHECK(m < last);
        last = m;
      }
      for (double rho = rho0; rho < 2 * rho0 + 1; rho += 0.05) {
        CHECK(norm(repulsive_force({0, 0}, {-rho, 0}, rho, k, rho0)) == 0.0);
        CHECK(repulsive_potential(rho, k, rho0) == 0.0);
      }
    }
  }
}

TEST_CASE("forces rotate with the world") {
  CounterRng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const Vec2 robot{in_range(rng, -3, 3), in_range(rng, -3, 3)};
    const Vec2 goal{in_range(rng, -3, 3), in_range(rng, -3, 3)};
    const Vec2 obstacle{in_range(rng, -3, 3), in_range(rng, -3, 3)};
    const double rho = in_range(rng, 0.05, 3.0);
    const double phi = in_range(rng, -3.14, 3.14);

    const Vec2 fa = rotate(attractive_force(robot, goal, 0.7), phi);
    const Vec2 ga = attractive_force(rotate(robot, phi), rotate(goal, phi), 0.7);
    CHECK(norm(fa - ga) < 1e-9);

    const Vec2 fr = rotate(repulsive_force(robot, obstacle, rho, 0.5, 1.5), phi);
    const Vec2 gr = repulsive_force(rotate(robot, phi), rotate(obstacle, phi), rho, 0.5, 1.5);
    CHECK(norm(fr - gr) <= 1e-9 * std::max(1.0, norm(fr)));
  }
}

TEST_CASE("total repulsion is the sum over obstacles and the resultant is capped") {
  CounterRng rng(32);
  ApfParams params;
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto w = random_world(rng);
    if (check_collision(w).any()) continue;
    const Vec2 here = w.robot.pose.position();
    Vec2 sum;
    for (const auto& s : w.shelves) {
      const auto c = shelf_contact(here, w.robot.radius, s);
      sum += repulsive_force(here, c.point, c.rho, params.k_rep, params.rho0);
    }
    for (const auto& p : w.pedestrians) {
      const auto c = disc_contact(here, w.robot.radius, p.position, 0.5 * p.shoulder_width);
      sum += repulsive_force(here, c.point, c.rho, params.k_rep, params.rho0);
    }
    const ForceResult f = total_force(w, {5, 5}, std::nullopt, params);
    CHECK(norm(f.repulsive - sum) <= 1e-9 * std::max(1.0, norm(sum)));
    CHECK(norm(f.resultant) <= params.force_cap + 1e-12);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("blend examples") {
  const ApfParams params;  // rho0 1.5, blend_distance 2.0
  const world::Twist follow{1.0, 0.4};
  const world::Twist field{0.2, -0.6};
  CHECK(blend(follow, field, 2.5, params) == follow);
  CHECK(blend(follow, field, 0.3, params) == field);
  const double midway = 0.5 * (0.5 * params.rho0 + params.blend_distance);
  const world::Twist mid = blend(follow, field, midway, params);
  CHECK(mid.v == doctest::Approx(0.6));
  CHECK(mid.omega == doctest::Approx(-0.1));
}
