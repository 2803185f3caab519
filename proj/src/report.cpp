#include "wfollow/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "wfollow/config.hpp"
#include "wfollow/errors.hpp"
#include "wfollow/format.hpp"
#include "wfollow/rng.hpp"

namespace wfollow::report {

void write_ticks(std::ostream& out, const std::vector<sim::TickRecord>& ticks) {
  out << kTicksHeader << '\n';
  for (const auto& r : ticks) {
    out << fixed6(r.t) << ',' << fixed6(r.robot.x) << ',' << fixed6(r.robot.y) << ',' << fixed6(r.robot.theta) << ',';
    if (r.target) {
      out << fixed6(r.target->x) << ',' << fixed6(r.target->y);
    } else {
      out << ',';
    }
    out << ',' << r.lock_id.value_or(-1) << ',' << fixed6(r.cmd.v) << ',' << fixed6(r.cmd.omega) << ','
        << fixed6(r.min_clearance) << ',' << r.n_detections << ',' << r.n_confirmed << '\n';
  }
}

std::string ticks_csv(const std::vector<sim::TickRecord>& ticks) {
  std::ostringstream ss;
  write_ticks(ss, ticks);
  return ss.str();
}

void write_metrics(std::ostream& out, const sim::MetricsReport& m) {
  out << "id_switches_on_lock=" << m.id_switches_on_lock << '\n'
      << "tracker_id_switches_ground_truth=" << m.tracker_id_switches_ground_truth << '\n'
      << "target_loss_events=" << m.target_loss_events << '\n'
      << "collisions=" << m.collisions << '\n'
      << "min_clearance_overall=" << fixed6(m.min_clearance_overall) << '\n'
      << "final_distance_to_target=" << fixed6(m.final_distance_to_target) << '\n'
      << "completed=" << (m.completed ? "true" : "false") << '\n'
      << "path_length=" << fixed6(m.path_length) << '\n'
      << "steps_run=" << m.steps_run << '\n'
      << "reacquisitions=" << m.reacquisitions << '\n'
      << "local_minimum_ticks=" << m.local_minimum_ticks << '\n';
}

void write_tracks(std::ostream& out, const std::vector<std::vector<sim::TrackRow>>& frames) {
  out << kTracksHeader << '\n';
  for (std::size_t f = 0; f < frames.size(); ++f) {
    for (const auto& row : frames[f]) {
      out << f << ',' << row.id << ',' << fixed6(row.box.u) << ',' << fixed6(row.box.v) << ',' << fixed6(row.box.w)
          << ',' << fixed6(row.box.h) << ',' << tracker::to_string(row.stage) << '\n';
    }
  }
}

std::vector<FieldSample> sample_field(const world::WorldState& world, Vec2 goal,
                                      const std::optional<std::string>& exclude_id, const apf::ApfParams& params,
                                      std::size_t n) {
  std::vector<FieldSample> out;
  if (n == 0) return out;
  out.reserve(n * n);
  const double cw = (world.bounds.max_x - world.bounds.min_x) / static_cast<double>(n);
  const double ch = (world.bounds.max_y - world.bounds.min_y) / static_cast<double>(n);
  world::WorldState probe = world;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = world.bounds.min_x + (static_cast<double>(i) + 0.5) * cw;
      const double y = world.bounds.min_y + (static_cast<double>(j) + 0.5) * ch;
      probe.robot.pose.x = x;
      probe.robot.pose.y = y;
      const apf::ForceResult f = apf::total_force(probe, goal, exclude_id, params);
      out.push_back({x, y, f.resultant.x, f.resultant.y, apf::total_potential(probe, goal, exclude_id, params)});
    }
  }
  return out;
}

void write_field(std::ostream& out, const std::vector<FieldSample>& samples) {
  out << kFieldHeader << '\n';
  for (const auto& s : samples) {
    out << fixed6(s.x) << ',' << fixed6(s.y) << ',' << fixed6(s.fx) << ',' << fixed6(s.fy) << ',' << fixed6(s.u_total)
        << '\n';
  }
}

std::uint64_t content_hash(std::string_view bytes) { return fnv1a64(bytes); }

std::string content_hash_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, content_hash(bytes));
  return buf;
}

void write_manifest(std::ostream& out, const RunManifest& m) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, m.config_hash);
  nlohmann::json doc = {
      {"config_path", m.config_path},
      {"seed", m.seed},
      {"output_dir", m.output_dir},
      {"artifacts", m.artifacts},
      {"tool_version", m.tool_version},
      {"schema", config::kSchema},
      {"config_hash", std::string("fnv1a64:") + hash},
  };
  out << doc.dump(2) << '\n';
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("cannot write '" + path.string() + "'");
}

}  // namespace wfollow::report
