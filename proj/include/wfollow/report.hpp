#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wfollow/sim.hpp"

namespace wfollow::report {

inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr const char* kTicksHeader =
    "t,robot_x,robot_y,robot_theta,target_x,target_y,lock_id,cmd_v,cmd_omega,min_clearance,n_detections,n_confirmed";
inline constexpr const char* kTracksHeader = "frame,track_id,u,v,w,h,stage";
inline constexpr const char* kFieldHeader = "x,y,fx,fy,u_total";

/// `lock_id` is -1 while no track is locked; target columns are empty when
/// the scenario has no target.
void write_ticks(std::ostream& out, const std::vector<sim::TickRecord>& ticks);
std::string ticks_csv(const std::vector<sim::TickRecord>& ticks);

/// One `key=value` line per metric in declaration order.
void write_metrics(std::ostream& out, const sim::MetricsReport& metrics);

void write_tracks(std::ostream& out, const std::vector<std::vector<sim::TrackRow>>& frames);

struct FieldSample {
  double x{0.0};
  double y{0.0};
  double fx{0.0};
  double fy{0.0};
  double u_total{0.0};
};

/// Samples the total force and potential at the centers of an n x n grid
/// of cells covering the world bounds, row by row from min_y.
std::vector<FieldSample> sample_field(const world::WorldState& world, Vec2 goal,
                                      const std::optional<std::string>& exclude_id, const apf::ApfParams& params,
                                      std::size_t n);
void write_field(std::ostream& out, const std::vector<FieldSample>& samples);

struct RunManifest {
  std::string config_path;
  std::uint64_t seed{0};
  std::string output_dir;
  std::vector<std::string> artifacts;
  std::string tool_version{kToolVersion};
  std::uint64_t config_hash{0};
};

/// FNV-1a 64 of the bytes, as 16 lowercase hex digits.
std::string content_hash_hex(std::string_view bytes);
std::uint64_t content_hash(std::string_view bytes);

void write_manifest(std::ostream& out, const RunManifest& manifest);

/// Writes `content` to `path`, creating parent directories; IoError on
/// failure.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace wfollow::report
