#include <doctest.h>

#include <cmath>
#include <vector>

#include "wfollow/errors.hpp"
#include "wfollow/report.hpp"
#include "wfollow/scenarios.hpp"
#include "wfollow/sim.hpp"

using namespace wfollow;
using namespace wfollow::sim;

TEST_CASE("halving the timestep in S2 moves the final pose by less than 0.1 m") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const ScenarioConfig coarse = scenario_s2(seed);
    ScenarioConfig fine = coarse;
    fine.dt = coarse.dt / 2;
    fine.max_steps = coarse.max_steps * 2;
    const auto a = run(coarse);
    const auto b = run(fine);
    REQUIRE_FALSE(a.ticks.empty());
    REQUIRE_FALSE(b.ticks.empty());
    const auto& pa = a.ticks.back().robot;
    const auto& pb = b.ticks.back().robot;
    CAPTURE(seed);
    CHECK(std::hypot(pa.x - pb.x, pa.y - pb.y) < 0.1);
  }
}

TEST_CASE("records are contiguous and pedestrians stay in bounds") {
  for (const auto& c : builtin_scenarios(2)) {
    const auto r = run(c);
    REQUIRE(r.ticks.size() == r.metrics.steps_run);
    CHECK(r.ticks.size() <= c.max_steps);
    for (std::size_t i = 0; i < r.ticks.size(); ++i) {
      CHECK(r.ticks[i].t == doctest::Approx(static_cast<double>(i + 1) * c.dt));
      if (i > 0) CHECK(r.ticks[i].t > r.ticks[i - 1].t);
      for (std::size_t k = 0; k < c.pedestrians.size(); ++k) {
        if (r.ticks[i].t < c.pedestrians[k].spawn_time) continue;
        CHECK(c.bounds.contains(r.ticks[i].pedestrians[k]));
      }
    }
  }
}

TEST_CASE("completion implies a clean run ending locked") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (const auto& c : builtin_scenarios(seed)) {
      const auto r = run(c);
      if (!r.metrics.completed) continue;
      CHECK(r.metrics.collisions == 0);
      for (const auto& t : r.ticks) {
        CHECK_FALSE(t.collision);
        CHECK(t.min_clearance >= 0.0);
      }
      CHECK(r.ticks.back().lock_state == follow::LockState::Locked);
    }
  }
}

TEST_CASE("lock switches are explained by tracker switches or reacquisitions") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (const auto& c : builtin_scenarios(seed)) {
      const auto m = run(c).metrics;
      CHECK(m.id_switches_on_lock <= m.tracker_id_switches_ground_truth + m.reacquisitions);
    }
  }
}

TEST_CASE("an empty warehouse runs to the end without moving") {
  ScenarioConfig c = scenario_s2(1);
  c.pedestrians.clear();
  c.target_id.clear();
  c.max_steps = 120;
  const auto r = run(c);
  CHECK(r.metrics.steps_run == 120);
  CHECK_FALSE(r.metrics.completed);
  CHECK(r.metrics.collisions == 0);
  CHECK(r.metrics.path_length == 0.0);
  for (const auto& t : r.ticks) CHECK(t.robot == c.robot.pose);
}

TEST_CASE("runs are bit-identical, serially and in a batch") {
  const auto configs = builtin_scenarios(9);
  const auto batch = run_batch(configs, 3);
  REQUIRE(batch.size() == configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const std::string once = report::ticks_csv(run(configs[i]).ticks);
    CHECK(report::ticks_csv(run(configs[i]).ticks) == once);
    CHECK(report::ticks_csv(batch[i].ticks) == once);
  }
}

TEST_CASE("without repulsion the S3 walker is hit") {
  // Shows that S3 is a genuine near-collision: avoidance is what saves it.
  ScenarioConfig c = scenario_s3(1);
  c.apf.k_rep = 1e-4;
  const auto r = run(c);
  CHECK(r.metrics.collisions > 0);
}

TEST_CASE("invalid configs are rejected before the first step") {
  ScenarioConfig c = scenario_s2(1);
  c.dt = 0.0;
  CHECK_THROWS_AS(run(c), ConfigError);
  c = scenario_s2(1);
  c.target_id = "ghost";
  CHECK_THROWS_AS(run(c), ConfigError);
}
