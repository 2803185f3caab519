#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wfollow/apf.hpp"
#include "wfollow/assignment.hpp"
#include "wfollow/config.hpp"
#include "wfollow/detlog.hpp"
#include "wfollow/errors.hpp"
#include "wfollow/follow.hpp"
#include "wfollow/report.hpp"
#include "wfollow/scenarios.hpp"
#include "wfollow/sim.hpp"
#include "wfollow/world.hpp"

namespace py = pybind11;
using namespace wfollow;

namespace {

py::dict metrics_dict(const sim::MetricsReport& m) {
  py::dict d;
  d["id_switches_on_lock"] = m.id_switches_on_lock;
  d["tracker_id_switches_ground_truth"] = m.tracker_id_switches_ground_truth;
  d["target_loss_events"] = m.target_loss_events;
  d["collisions"] = m.collisions;
  d["min_clearance_overall"] = m.min_clearance_overall;
  d["final_distance_to_target"] = m.final_distance_to_target;
  d["completed"] = m.completed;
  d["path_length"] = m.path_length;
  d["steps_run"] = m.steps_run;
  d["reacquisitions"] = m.reacquisitions;
  d["local_minimum_ticks"] = m.local_minimum_ticks;
  return d;
}

sim::ScenarioConfig scenario_by_name(const std::string& name, std::uint64_t seed) {
  auto c = sim::builtin_scenario(name, seed);
  if (!c) throw py::value_error("unknown builtin scenario '" + name + "'");
  return *c;
}

}  // namespace

PYBIND11_MODULE(_wfollow, m) {
  m.doc() = "Warehouse person-following simulator";
  m.attr("__version__") = report::kToolVersion;
  m.attr("SCHEMA") = config::kSchema;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<SimulationError>(m, "SimulationError", PyExc_RuntimeError);

  py::class_<sim::ScenarioConfig>(m, "Scenario")
      .def_readwrite("name", &sim::ScenarioConfig::name)
      .def_readwrite("dt", &sim::ScenarioConfig::dt)
      .def_readwrite("max_steps", &sim::ScenarioConfig::max_steps)
      .def_property(
          "seed", [](const sim::ScenarioConfig& c) { return c.rng_seed; },
          [](sim::ScenarioConfig& c, std::uint64_t s) {
            c.rng_seed = s;
            c.noise.rng_seed = s;
          })
      .def_readonly("target_id", &sim::ScenarioConfig::target_id)
      .def_property_readonly("pedestrian_ids",
                             [](const sim::ScenarioConfig& c) {
                               std::vector<std::string> ids;
                               for (const auto& p : c.pedestrians) ids.push_back(p.id);
                               return ids;
                             })
      .def("to_json", &config::serialize_scenario)
      .def_static("from_json", &config::parse_scenario, py::arg("text"))
      .def("__eq__", [](const sim::ScenarioConfig& a, const sim::ScenarioConfig& b) { return a == b; })
      .def("__repr__", [](const sim::ScenarioConfig& c) { return "<Scenario " + c.name + ">"; });

  m.def("builtin_scenario", &scenario_by_name, py::arg("name"), py::arg("seed") = 1,
        "One of 'S1', 'S2', 'S3'.");
  m.def("load_scenario", [](const std::string& path) { return config::load_scenario(path); }, py::arg("path"));

  py::class_<sim::RunResult>(m, "RunResult")
      .def_property_readonly("metrics", [](const sim::RunResult& r) { return metrics_dict(r.metrics); })
      .def_property_readonly("ticks_csv", [](const sim::RunResult& r) { return report::ticks_csv(r.ticks); })
      .def_property_readonly("metrics_text",
                             [](const sim::RunResult& r) {
                               std::ostringstream ss;
                               report::write_metrics(ss, r.metrics);
                               return ss.str();
                             })
      .def_property_readonly("robot_path",
                             [](const sim::RunResult& r) {
                               std::vector<std::tuple<double, double, double>> out;
                               for (const auto& t : r.ticks) out.emplace_back(t.robot.x, t.robot.y, t.robot.theta);
                               return out;
                             })
      .def_property_readonly("lock_ids", [](const sim::RunResult& r) {
        std::vector<std::optional<int>> out;
        for (const auto& t : r.ticks) out.push_back(t.lock_id);
        return out;
      });

  m.def("run", &sim::run, py::arg("scenario"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "run_batch",
      [](const std::vector<sim::ScenarioConfig>& configs, unsigned jobs) { return sim::run_batch(configs, jobs); },
      py::arg("scenarios"), py::arg("jobs") = 1, py::call_guard<py::gil_scoped_release>());

  m.def(
      "track_log",
      [](const std::string& path) {
        const auto log = sensor::read_detlog(std::filesystem::path(path));
        const auto r = sim::track_log(log, {});
        py::dict d;
        d["frames"] = log.size();
        d["confirmed_ids"] = r.confirmed_ids;
        d["id_switches"] = r.id_switches;
        return d;
      },
      py::arg("path"), "Runs the tracker with default parameters over a detection log file.");

  m.def(
      "solve_assignment", [](const Eigen::MatrixXd& cost) { return tracker::solve_assignment(cost); },
      py::arg("cost"), "Minimum-cost matching; non-finite cells are forbidden. Returns (row, col) pairs.");

  m.def(
      "step_unicycle",
      [](std::tuple<double, double, double> pose, double v, double omega, double dt) {
        const auto [x, y, th] = pose;
        const auto p = world::step_unicycle({x, y, th}, v, omega, dt);
        return std::make_tuple(p.x, p.y, p.theta);
      },
      py::arg("pose"), py::arg("v"), py::arg("omega"), py::arg("dt"));

  m.def(
      "steer",
      [](double u, double image_width, double deadband) {
        follow::FollowParams p;
        p.center_deadband = deadband;
        switch (follow::steer(u, image_width, p)) {
          case follow::TurnDirection::Left: return "left";
          case follow::TurnDirection::Right: return "right";
          default: return "straight";
        }
      },
      py::arg("u"), py::arg("image_width") = 640.0, py::arg("deadband") = 20.0);

  m.def(
      "repulsive_force",
      [](std::pair<double, double> robot, std::pair<double, double> obstacle, double rho, double k_rep,
         double rho0) {
        const Vec2 f = apf::repulsive_force({robot.first, robot.second}, {obstacle.first, obstacle.second}, rho,
                                            k_rep, rho0);
        return std::make_pair(f.x, f.y);
      },
      py::arg("robot"), py::arg("obstacle"), py::arg("rho"), py::arg("k_rep"), py::arg("rho0"));
  m.def(
      "attractive_force",
      [](std::pair<double, double> robot, std::pair<double, double> goal, double k_att) {
        const Vec2 f = apf::attractive_force({robot.first, robot.second}, {goal.first, goal.second}, k_att);
        return std::make_pair(f.x, f.y);
      },
      py::arg("robot"), py::arg("goal"), py::arg("k_att"));
}
