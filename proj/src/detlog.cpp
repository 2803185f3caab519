#include "wfollow/detlog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "wfollow/errors.hpp"
#include "wfollow/format.hpp"

namespace wfollow::sensor {
namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(std::string_view s, std::size_t line, std::string_view column) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || s.empty() || !std::isfinite(v)) {
    throw ParseError(line, "malformed number '" + std::string(s) + "' in column " + std::string(column));
  }
  return v;
}

long parse_frame(std::string_view s, std::size_t line) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || v < 0) {
    throw ParseError(line, "malformed frame index '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

void write_detlog(std::ostream& out, const DetectionLog& log, std::size_t feature_dim) {
  const bool with_gt = std::any_of(log.begin(), log.end(), [](const auto& frame) {
    return std::any_of(frame.begin(), frame.end(), [](const Detection& d) { return !d.source.empty(); });
  });
  out << "frame,u,v,w,h,depth,conf";
  for (std::size_t k = 0; k < feature_dim; ++k) out << ",f" << k;
  if (with_gt) out << ",gt";
  out << '\n';
  for (std::size_t f = 0; f < log.size(); ++f) {
    std::vector<const Detection*> rows;
    for (const auto& d : log[f]) rows.push_back(&d);
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Detection* a, const Detection* b) { return a->u_center < b->u_center; });
    for (const Detection* d : rows) {
      out << f << ',' << fixed6(d->u_center) << ',' << fixed6(d->v_center) << ','
          << fixed6(d->width_px) << ',' << fixed6(d->height_px) << ',' << fixed6(d->depth) << ','
          << fixed6(d->confidence);
      for (std::size_t k = 0; k < feature_dim; ++k) {
        out << ',' << fixed6(k < d->feature.size() ? d->feature[k] : 0.0);
      }
      if (with_gt) out << ',' << d->source;
      out << '\n';
    }
  }
}

void write_detlog(const std::filesystem::path& path, const DetectionLog& log, std::size_t feature_dim) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_detlog(out, log, feature_dim);
  if (!out) throw IoError("write failed: " + path.string());
}

DetectionLog read_detlog(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split(line);
  static constexpr std::string_view kFixed[] = {"frame", "u", "v", "w", "h", "depth", "conf"};
  if (header.size() < std::size(kFixed)) throw ParseError(1, "header has too few columns");
  for (std::size_t i = 0; i < std::size(kFixed); ++i) {
    if (header[i] != kFixed[i]) {
      throw ParseError(1, "expected column '" + std::string(kFixed[i]) + "', got '" + std::string(header[i]) + "'");
    }
  }
  const bool with_gt = header.back() == "gt";
  const std::size_t dim = header.size() - std::size(kFixed) - (with_gt ? 1 : 0);
  for (std::size_t k = 0; k < dim; ++k) {
    if (header[std::size(kFixed) + k] != "f" + std::to_string(k)) {
      throw ParseError(1, "expected feature column f" + std::to_string(k));
    }
  }

  DetectionLog log;
  long last_frame = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = split(line);
    if (cols.size() != header.size()) {
      throw ParseError(lineno, "expected " + std::to_string(header.size()) + " columns, got " +
                                   std::to_string(cols.size()));
    }
    const long frame = parse_frame(cols[0], lineno);
    if (frame < last_frame) throw ParseError(lineno, "frames must be non-decreasing");
    last_frame = frame;

    Detection d;
    d.u_center = parse_double(cols[1], lineno, "u");
    d.v_center = parse_double(cols[2], lineno, "v");
    d.width_px = parse_double(cols[3], lineno, "w");
    d.height_px = parse_double(cols[4], lineno, "h");
    d.depth = parse_double(cols[5], lineno, "depth");
    d.confidence = parse_double(cols[6], lineno, "conf");
    if (d.width_px <= 0 || d.height_px <= 0) throw ParseError(lineno, "box size must be positive");
    if (d.depth <= 0) throw ParseError(lineno, "depth must be positive");
    d.feature.resize(dim);
    double n2 = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      d.feature[k] = parse_double(cols[7 + k], lineno, header[7 + k]);
      n2 += d.feature[k] * d.feature[k];
    }
    if (dim > 0) {
      if (n2 <= 0.0) throw ParseError(lineno, "feature vector is zero");
      const double n = std::sqrt(n2);
      for (double& x : d.feature) x /= n;
    }
    if (with_gt) d.source = std::string(cols.back());

    if (static_cast<std::size_t>(frame) >= log.size()) log.resize(static_cast<std::size_t>(frame) + 1);
    log[static_cast<std::size_t>(frame)].push_back(std::move(d));
  }
  if (in.bad()) throw IoError("read failed");
  return log;
}

DetectionLog read_detlog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_detlog(in);
}

}  // namespace wfollow::sensor
