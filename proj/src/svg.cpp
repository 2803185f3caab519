#include "wfollow/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace wfollow::svg {
namespace {

constexpr double kMargin = 20.0;

class Canvas {
 public:
  explicit Canvas(const world::Rect& bounds) : bounds_(bounds) {
    const double span = std::max(bounds.max_x - bounds.min_x, bounds.max_y - bounds.min_y);
    scale_ = 800.0 / span;
    width_ = (bounds.max_x - bounds.min_x) * scale_ + 2 * kMargin;
    height_ = (bounds.max_y - bounds.min_y) * scale_ + 2 * kMargin;
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_) << "\" height=\"" << num(height_)
         << "\" viewBox=\"0 0 " << num(width_) << ' ' << num(height_) << "\">\n"
         << "<rect x=\"0\" y=\"0\" width=\"" << num(width_) << "\" height=\"" << num(height_)
         << "\" fill=\"white\"/>\n";
  }

  double sx(double x) const { return kMargin + (x - bounds_.min_x) * scale_; }
  double sy(double y) const { return kMargin + (bounds_.max_y - y) * scale_; }
  double scale() const { return scale_; }

  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
  }

  void rect(const world::Rect& r, const std::string& style) {
    out_ << "<rect x=\"" << num(sx(r.min_x)) << "\" y=\"" << num(sy(r.max_y)) << "\" width=\""
         << num((r.max_x - r.min_x) * scale_) << "\" height=\"" << num((r.max_y - r.min_y) * scale_) << "\" "
         << style << "/>\n";
  }

  void polyline(const std::vector<Vec2>& pts, const std::string& style) {
    if (pts.empty()) return;
    out_ << "<polyline points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      out_ << (i ? " " : "") << num(sx(pts[i].x)) << ',' << num(sy(pts[i].y));
    }
    out_ << "\" fill=\"none\" " << style << "/>\n";
  }

  void circle(Vec2 c, double r_px, const std::string& style) {
    out_ << "<circle cx=\"" << num(sx(c.x)) << "\" cy=\"" << num(sy(c.y)) << "\" r=\"" << num(r_px) << "\" " << style
         << "/>\n";
  }

  void line(Vec2 a, Vec2 b, const std::string& style) {
    out_ << "<line x1=\"" << num(sx(a.x)) << "\" y1=\"" << num(sy(a.y)) << "\" x2=\"" << num(sx(b.x)) << "\" y2=\""
         << num(sy(b.y)) << "\" " << style << "/>\n";
  }

  void text(Vec2 at, const std::string& s, const std::string& style = "font-size=\"12\"") {
    out_ << "<text x=\"" << num(sx(at.x)) << "\" y=\"" << num(sy(at.y)) << "\" " << style << ">" << s << "</text>\n";
  }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  world::Rect bounds_;
  double scale_{1.0};
  double width_{0.0};
  double height_{0.0};
  std::ostringstream out_;
};

std::string color_for(std::size_t i) {
  static constexpr std::array<const char*, 6> palette = {"#d62728", "#2ca02c", "#9467bd",
                                                         "#ff7f0e", "#8c564b", "#17becf"};
  return palette[i % palette.size()];
}

// Blue (low) to yellow (high) ramp.
std::string ramp(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(30 + 225 * t));
  const int g = static_cast<int>(std::lround(60 + 170 * t));
  const int b = static_cast<int>(std::lround(160 - 120 * t));
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string trajectory_plot(const sim::ScenarioConfig& config, const sim::RunResult& result) {
  Canvas c(config.bounds);
  c.rect(config.bounds, "fill=\"none\" stroke=\"#444\" stroke-width=\"1\"");
  for (const auto& s : config.shelves) c.rect(s, "fill=\"#9e9e9e\" stroke=\"#555\" stroke-width=\"1\"");

  for (std::size_t i = 0; i < config.pedestrians.size(); ++i) {
    const auto& p = config.pedestrians[i];
    std::vector<Vec2> route{p.position};
    route.insert(route.end(), p.waypoints.begin(), p.waypoints.end());
    c.polyline(route, "stroke=\"" + color_for(i) + "\" stroke-width=\"2\" stroke-dasharray=\"6,4\"");
    c.circle(p.position, 4, "fill=\"" + color_for(i) + "\"");
    c.text(p.position + Vec2{0.15, 0.15}, p.id, "font-size=\"12\" fill=\"" + color_for(i) + "\"");
  }

  std::vector<Vec2> robot_path{config.robot.pose.position()};
  for (const auto& t : result.ticks) robot_path.push_back(t.robot.position());
  c.polyline(robot_path, "stroke=\"#1f77b4\" stroke-width=\"2.5\"");
  c.circle(robot_path.front(), 5, "fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"");
  c.circle(robot_path.back(), config.robot.radius * c.scale(), "fill=\"#1f77b4\" fill-opacity=\"0.4\"");
  c.text({config.bounds.min_x + 0.2, config.bounds.max_y - 0.4},
         config.name + ": robot (solid), walking routes (dashed)");
  return c.finish();
}

std::string field_plot(const sim::ScenarioConfig& config, const std::vector<report::FieldSample>& samples,
                       std::size_t grid, Vec2 goal) {
  Canvas c(config.bounds);
  if (grid > 0 && !samples.empty()) {
    // Log scale keeps the obstacle peaks from washing out the bowl.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : samples) {
      const double v = std::log1p(std::max(0.0, s.u_total));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double cw = (config.bounds.max_x - config.bounds.min_x) / static_cast<double>(grid);
    const double ch = (config.bounds.max_y - config.bounds.min_y) / static_cast<double>(grid);
    const double max_arrow = 0.45 * std::min(cw, ch);
    double max_force = 0.0;
    for (const auto& s : samples) max_force = std::max(max_force, std::hypot(s.fx, s.fy));
    for (const auto& s : samples) {
      const double v = std::log1p(std::max(0.0, s.u_total));
      const double t = hi > lo ? (v - lo) / (hi - lo) : 0.0;
      c.rect({s.x - cw / 2, s.y - ch / 2, s.x + cw / 2, s.y + ch / 2}, "fill=\"" + ramp(t) + "\" stroke=\"none\"");
    }
    if (max_force > 0) {
      for (const auto& s : samples) {
        const Vec2 f{s.fx, s.fy};
        const Vec2 tip = Vec2{s.x, s.y} + f * (max_arrow / max_force);
        c.line({s.x, s.y}, tip, "stroke=\"black\" stroke-width=\"0.8\"");
      }
    }
  }
  for (const auto& s : config.shelves) c.rect(s, "fill=\"none\" stroke=\"white\" stroke-width=\"1.5\"");
  c.circle(goal, 6, "fill=\"none\" stroke=\"red\" stroke-width=\"2\"");
  c.text({config.bounds.min_x + 0.2, config.bounds.max_y - 0.4}, config.name + ": total potential and force",
         "font-size=\"12\" fill=\"white\"");
  return c.finish();
}

}  // namespace wfollow::svg
