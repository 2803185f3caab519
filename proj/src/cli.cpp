#include "wfollow/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "wfollow/config.hpp"
#include "wfollow/errors.hpp"
#include "wfollow/format.hpp"
#include "wfollow/report.hpp"
#include "wfollow/scenarios.hpp"
#include "wfollow/svg.hpp"

namespace wfollow::cli {
namespace {

namespace fs = std::filesystem;

struct LoadedScenario {
  sim::ScenarioConfig config;
  std::string source;  // path, or "builtin:S2"
  std::string content;  // bytes the config was parsed from
};

LoadedScenario load(const std::string& name_or_path) {
  if (auto builtin = sim::builtin_scenario(name_or_path)) {
    const std::string text = config::serialize_scenario(*builtin);
    return {*builtin, "builtin:" + builtin->name, text};
  }
  std::string text;
  try {
    text = config::read_text(name_or_path);
  } catch (const IoError& e) {
    // An unreadable scenario is a configuration problem, not an output one.
    throw ConfigError("scenario", 0, e.what());
  }
  return {config::parse_scenario(text), name_or_path, text};
}

fs::path default_out() {
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return "out";
}

void apply_overrides(sim::ScenarioConfig& c, std::optional<std::uint64_t> seed, std::optional<double> dt) {
  if (seed) {
    c.rng_seed = *seed;
    c.noise.rng_seed = *seed;
  }
  if (dt) {
    if (!(*dt > 0) || !std::isfinite(*dt)) throw ConfigError("dt-override", 0, "must be positive");
    // Keep the simulated horizon unchanged.
    const double horizon = c.dt * static_cast<double>(c.max_steps);
    c.max_steps = static_cast<std::size_t>(std::ceil(horizon / *dt - 1e-9));
    c.dt = *dt;
  }
  sim::validate(c);
}

bool passed(const sim::MetricsReport& m) { return m.completed && m.collisions == 0 && m.target_loss_events == 0; }

struct RunJob {
  LoadedScenario scenario;
  fs::path out_dir;
};

void write_run_artifacts(const RunJob& job, const sim::RunResult& result, bool plot) {
  const auto& c = job.scenario.config;
  report::RunManifest manifest;
  manifest.config_path = job.scenario.source;
  manifest.seed = c.rng_seed;
  manifest.output_dir = job.out_dir.string();
  manifest.config_hash = report::content_hash(job.scenario.content);

  auto emit = [&](const std::string& name, const std::string& content) {
    report::write_file(job.out_dir / name, content);
    manifest.artifacts.push_back(name);
  };
  emit("ticks.csv", report::ticks_csv(result.ticks));
  std::ostringstream metrics;
  report::write_metrics(metrics, result.metrics);
  emit("metrics.txt", metrics.str());
  std::ostringstream tracks;
  report::write_tracks(tracks, result.tracks);
  emit("tracks.csv", tracks.str());
  if (plot) emit("trajectory.svg", svg::trajectory_plot(c, result));

  std::ostringstream m;
  report::write_manifest(m, manifest);
  report::write_file(job.out_dir / "manifest.json", m.str());
}

int cmd_run(const std::vector<std::string>& scenarios, const std::vector<std::uint64_t>& seeds,
            std::optional<double> dt, const fs::path& out_dir, bool plot, unsigned jobs, std::ostream& out) {
  std::vector<RunJob> batch;
  const std::vector<std::optional<std::uint64_t>> seed_list =
      seeds.empty() ? std::vector<std::optional<std::uint64_t>>{std::nullopt}
                    : std::vector<std::optional<std::uint64_t>>(seeds.begin(), seeds.end());
  const bool many = scenarios.size() * seed_list.size() > 1;
  for (const auto& name_or_path : scenarios) {
    for (const auto& seed : seed_list) {
      LoadedScenario s = load(name_or_path);
      apply_overrides(s.config, seed, dt);
      fs::path dir = out_dir;
      if (many) dir /= s.config.name + "_seed" + std::to_string(s.config.rng_seed);
      batch.push_back({std::move(s), dir});
    }
  }

  std::vector<sim::ScenarioConfig> configs;
  for (const auto& j : batch) configs.push_back(j.scenario.config);
  const std::vector<sim::RunResult> results = sim::run_batch(configs, jobs);

  bool all_passed = true;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    write_run_artifacts(batch[i], results[i], plot);
    const auto& m = results[i].metrics;
    out << batch[i].scenario.config.name << " seed=" << batch[i].scenario.config.rng_seed
        << " completed=" << (m.completed ? "true" : "false") << " collisions=" << m.collisions
        << " target_loss_events=" << m.target_loss_events << " id_switches_on_lock=" << m.id_switches_on_lock
        << " min_clearance=" << fixed6(m.min_clearance_overall)
        << " final_distance=" << fixed6(m.final_distance_to_target) << " -> " << batch[i].out_dir.string()
        << '\n';
    all_passed = all_passed && passed(m);
  }
  return all_passed ? kSuccess : kCriteriaFailed;
}

int cmd_track(const fs::path& detections, const std::optional<fs::path>& params_path, const fs::path& out_dir,
              std::ostream& out) {
  tracker::TrackerParams params;
  if (params_path) {
    std::string text;
    try {
      text = config::read_text(*params_path);
    } catch (const IoError& e) {
      throw ConfigError("params", 0, e.what());
    }
    params = config::parse_tracker_params(text);
  }
  sensor::DetectionLog log;
  try {
    log = sensor::read_detlog(detections);
  } catch (const IoError& e) {
    throw ConfigError("detections", 0, e.what());
  }
  const sim::TrackLogResult result = sim::track_log(log, params);
  std::ostringstream tracks;
  report::write_tracks(tracks, result.tracks);
  report::write_file(out_dir / "tracks.csv", tracks.str());
  out << "frames=" << log.size() << '\n' << "confirmed_tracks=" << result.confirmed_ids.size() << '\n';
  out << "id_switches=" << result.id_switches << '\n';
  return kSuccess;
}

int cmd_field(const std::string& scenario, std::size_t grid, const fs::path& out_dir, bool plot, std::ostream& out) {
  const LoadedScenario s = load(scenario);
  const auto& c = s.config;
  world::WorldState w;
  w.robot = c.robot;
  w.pedestrians = c.pedestrians;
  w.shelves = c.shelves;
  w.bounds = c.bounds;

  // The field is drawn toward the target's destination with the target
  // itself left out of the obstacle set.
  Vec2 goal = c.robot.pose.position();
  std::optional<std::string> exclude;
  for (const auto& p : c.pedestrians) {
    if (p.id == c.target_id) {
      goal = p.waypoints.empty() ? p.position : p.waypoints.back();
      exclude = p.id;
    }
  }
  const auto samples = report::sample_field(w, goal, exclude, c.apf, grid);
  std::ostringstream csv;
  report::write_field(csv, samples);
  report::write_file(out_dir / "field.csv", csv.str());
  if (plot) report::write_file(out_dir / "field.svg", svg::field_plot(c, samples, grid, goal));
  out << "rows=" << samples.size() << " -> " << (out_dir / "field.csv").string() << '\n';
  return kSuccess;
}

int cmd_export(const std::string& scenario, std::optional<std::uint64_t> seed, const fs::path& path,
               std::ostream& out) {
  LoadedScenario s = load(scenario);
  apply_overrides(s.config, seed, std::nullopt);
  report::write_file(path, config::serialize_scenario(s.config));
  out << path.string() << '\n';
  return kSuccess;
}

}  // namespace


int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Warehouse person-following simulator"};
  app.set_version_flag("--version", std::string("wfollow ") + report::kToolVersion + " (schema " + config::kSchema +
                                        ", " + config::kTrackerSchema + ")");
  app.require_subcommand(1);

  const std::string env_hint = std::string("default: $") + kOutputDirEnv + " or ./out";

  std::vector<std::string> scenarios;
  std::vector<std::uint64_t> seeds;
  std::optional<double> dt_override;
  std::string run_out;
  bool run_plot = false;
  unsigned jobs = 1;
  auto* run = app.add_subcommand("run", "Run scenarios and write ticks, metrics, tracks and a manifest");
  run->add_option("--scenario", scenarios, "Scenario JSON path or S1/S2/S3 (repeatable)")->required();
  run->add_option("--seed", seeds, "RNG seed override (repeatable)");
  run->add_option("--dt-override", dt_override, "Timestep override; the simulated horizon is kept");
  run->add_option("--out", run_out, "Output directory (" + env_hint + ")");
  run->add_flag("--plot", run_plot, "Also write trajectory.svg");
  run->add_option("--jobs", jobs, "Parallel runs in batch mode")->check(CLI::Range(1u, 1024u));

  std::string detections;
  std::string params;
  std::string track_out;
  auto* track = app.add_subcommand("track", "Run the tracker alone over a detection log");
  track->add_option("--detections", detections, "Detection log CSV")->required();
  track->add_option("--params", params, "Tracker parameter JSON");
  track->add_option("--out", track_out, "Output directory (" + env_hint + ")");

  std::string field_scenario;
  std::size_t grid = 0;
  std::string field_out;
  bool field_plot = false;
  auto* field = app.add_subcommand("field", "Sample the potential field on a grid");
  field->add_option("--scenario", field_scenario, "Scenario JSON path or S1/S2/S3")->required();
  field->add_option("--grid", grid, "Cells per axis")->required()->check(CLI::PositiveNumber);
  field->add_option("--out", field_out, "Output directory (" + env_hint + ")");
  field->add_flag("--plot", field_plot, "Also write field.svg");

  std::string export_scenario;
  std::optional<std::uint64_t> export_seed;
  std::string export_path;
  auto* exp = app.add_subcommand("export", "Write a scenario as a fully explicit JSON document");
  exp->add_option("--scenario", export_scenario, "Scenario JSON path or S1/S2/S3")->required();
  exp->add_option("--seed", export_seed, "RNG seed override");
  exp->add_option("--out", export_path, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }

  auto out_dir = [](const std::string& given) { return given.empty() ? default_out() : fs::path(given); };
  try {
    if (*run) {
      return cmd_run(scenarios, seeds, dt_override, out_dir(run_out), run_plot, jobs, out);
    }
    if (*track) {
      const std::optional<fs::path> p = params.empty() ? std::nullopt : std::optional<fs::path>(params);
      return cmd_track(detections, p, out_dir(track_out), out);
    }
    if (*field) return cmd_field(field_scenario, grid, out_dir(field_out), field_plot, out);
    if (*exp) return cmd_export(export_scenario, export_seed, export_path, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCriteriaFailed;
  }
  return kConfigError;
}

}  // namespace wfollow::cli
