#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "wfollow/sensor.hpp"

namespace wfollow::sensor {

/// Detections grouped by frame; index i holds frame i.
using DetectionLog = std::vector<std::vector<Detection>>;

/// CSV detection log.
///
/// Header `frame,u,v,w,h,depth,conf,f0,...,f{D-1}` with an optional trailing
/// `gt` column carrying the ground-truth pedestrian label. Floats use six
/// decimals; rows are sorted by (frame, u). Frames without detections have
/// no rows, so the frame count read back is `last frame + 1`.
void write_detlog(std::ostream& out, const DetectionLog& log, std::size_t feature_dim);
void write_detlog(const std::filesystem::path& path, const DetectionLog& log, std::size_t feature_dim);

/// Throws ParseError naming the offending line, IoError when unreadable.
DetectionLog read_detlog(std::istream& in);
DetectionLog read_detlog(const std::filesystem::path& path);

}  // namespace wfollow::sensor
