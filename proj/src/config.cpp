#include "wfollow/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wfollow/errors.hpp"

namespace wfollow::config {
namespace {

using json = nlohmann::json;

// Shared by every copy of LineCountingIterator; the parser copies its
// iterators freely.
struct LineCounter {
  std::size_t line{1};
  // Line of the most recent non-whitespace character consumed.
  std::size_t token_line{1};
};

class LineCountingIterator {
 public:
  using iterator_category = std::forward_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  LineCountingIterator() = default;
  LineCountingIterator(const char* pos, LineCounter* counter) : pos_(pos), counter_(counter) {}

  reference operator*() const { return *pos_; }
  LineCountingIterator& operator++() {
    const char c = *pos_;
    if (c == '\n') {
      ++counter_->line;
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      counter_->token_line = counter_->line;
    }
    ++pos_;
    return *this;
  }
  LineCountingIterator operator++(int) {
    auto copy = *this;
    ++*this;
    return copy;
  }
  friend bool operator==(const LineCountingIterator& a, const LineCountingIterator& b) { return a.pos_ == b.pos_; }

 private:
  const char* pos_{nullptr};
  LineCounter* counter_{nullptr};
};

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

std::string index_path(const std::string& parent, std::size_t i) { return parent + "[" + std::to_string(i) + "]"; }

// SAX consumer that records the source line of every value by its dotted
// path. The DOM itself is built by a separate standard parse.
class LineLocator {
 public:
  explicit LineLocator(const LineCounter& counter) : counter_(counter) {}

  bool null() { return scalar(); }
  bool boolean(bool) { return scalar(); }
  bool number_integer(json::number_integer_t) { return scalar(); }
  bool number_unsigned(json::number_unsigned_t) { return scalar(); }
  bool number_float(json::number_float_t, const std::string&) { return scalar(); }
  bool string(std::string&) { return scalar(); }
  bool binary(json::binary_t&) { return scalar(); }
  bool start_object(std::size_t) { return open(false); }
  bool start_array(std::size_t) { return open(true); }
  bool end_object() { return close(); }
  bool end_array() { return close(); }
  bool key(std::string& k) {
    frames_.back().key = k;
    return true;
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& ex) {
    error_line_ = counter_.line;
    error_path_ = child_path();
    error_message_ = ex.what();
    return false;
  }

  std::map<std::string, std::size_t> lines;
  std::size_t error_line_{0};
  std::string error_path_;
  std::string error_message_;

 private:
  struct Frame {
    bool array;
    std::size_t next_index;
    std::string key;
    std::string path;
  };

  std::string child_path() const {
    if (frames_.empty()) return {};
    const Frame& top = frames_.back();
    return top.array ? index_path(top.path, top.next_index) : join(top.path, top.key);
  }
  void advance() {
    if (!frames_.empty() && frames_.back().array) ++frames_.back().next_index;
  }
  bool scalar() {
    lines[child_path()] = counter_.token_line;
    advance();
    return true;
  }
  bool open(bool array) {
    const std::string path = child_path();
    lines[path] = counter_.token_line;
    frames_.push_back({array, 0, {}, path});
    return true;
  }
  bool close() {
    frames_.pop_back();
    advance();
    return true;
  }

  const LineCounter& counter_;
  std::vector<Frame> frames_;
};

// Typed access to a parsed document with line-aware errors.
class Reader {
 public:
  Reader(const json& root, std::map<std::string, std::size_t> lines) : root_(root), lines_(std::move(lines)) {}

  const json& root() const { return root_; }

  std::size_t line_of(std::string path) const {
    for (;;) {
      if (auto it = lines_.find(path); it != lines_.end()) return it->second;
      if (path.empty()) return 0;
      const auto cut = path.find_last_of(".[");
      path = cut == std::string::npos ? std::string() : path.substr(0, cut);
    }
  }

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw ConfigError(path, line_of(path), what);
  }

  void expect_object(const json& v, const std::string& path, std::initializer_list<const char*> allowed) const {
    if (!v.is_object()) fail(path, "expected an object");
    const std::set<std::string> known(allowed.begin(), allowed.end());
    for (const auto& [k, _] : v.items()) {
      if (!known.contains(k)) fail(join(path, k), "unknown field");
    }
  }

  const json* find(const json& obj, const std::string& parent, const char* key, bool required) const {
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(join(parent, key), "missing required field");
      return nullptr;
    }
    return &*it;
  }

  double as_double(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "must be finite");
    return d;
  }

  std::int64_t as_int(const json& v, const std::string& path) const {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
      fail(path, "integer out of range");
    }
    return v.get<std::int64_t>();
  }

  std::uint64_t as_u64(const json& v, const std::string& path) const {
    if (!v.is_number_unsigned()) fail(path, "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::string as_string(const json& v, const std::string& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> as_numbers(const json& v, const std::string& path, std::size_t n) const {
    if (!v.is_array() || v.size() != n) fail(path, "expected an array of " + std::to_string(n) + " numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(as_double(v[i], index_path(path, i)));
    return out;
  }

  Vec2 as_point(const json& v, const std::string& path) const {
    const auto p = as_numbers(v, path, 2);
    return {p[0], p[1]};
  }

  world::Rect as_rect(const json& v, const std::string& path) const {
    const auto r = as_numbers(v, path, 4);
    return {r[0], r[1], r[2], r[3]};
  }

  void opt(const json& obj, const std::string& parent, const char* key, double& out) const {
    if (const json* v = find(obj, parent, key, false)) out = as_double(*v, join(parent, key));
  }
  void opt(const json& obj, const std::string& parent, const char* key, int& out) const {
    if (const json* v = find(obj, parent, key, false)) {
      const auto i = as_int(*v, join(parent, key));
      if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) {
        fail(join(parent, key), "integer out of range");
      }
      out = static_cast<int>(i);
    }
  }
  void opt(const json& obj, const std::string& parent, const char* key, std::size_t& out) const {
    if (const json* v = find(obj, parent, key, false)) out = static_cast<std::size_t>(as_u64(*v, join(parent, key)));
  }

 private:
  const json& root_;
  std::map<std::string, std::size_t> lines_;
};

struct Parsed {
  json root;
  std::map<std::string, std::size_t> lines;
};

Parsed parse_document(std::string_view text) {
  LineCounter counter;
  LineLocator locator(counter);
  const LineCountingIterator first(text.data(), &counter);
  const LineCountingIterator last(text.data() + text.size(), &counter);
  if (!json::sax_parse(first, last, &locator)) {
    throw ConfigError(locator.error_path_, locator.error_line_, "malformed JSON: " + locator.error_message_);
  }
  return {json::parse(text), std::move(locator.lines)};
}

void read_tracker(const Reader& r, const json& obj, const std::string& path, tracker::TrackerParams& t) {
  r.expect_object(obj, path,
                  {"schema", "n_init", "max_age", "gating_threshold", "appearance_threshold", "lambda_motion",
                   "iou_threshold", "gallery_size", "process_noise_scale", "measurement_noise_scale"});
  r.opt(obj, path, "n_init", t.n_init);
  r.opt(obj, path, "max_age", t.max_age);
  r.opt(obj, path, "gating_threshold", t.gating_threshold);
  r.opt(obj, path, "appearance_threshold", t.appearance_threshold);
  r.opt(obj, path, "lambda_motion", t.lambda_motion);
  r.opt(obj, path, "iou_threshold", t.iou_threshold);
  r.opt(obj, path, "gallery_size", t.gallery_size);
  r.opt(obj, path, "process_noise_scale", t.process_noise_scale);
  r.opt(obj, path, "measurement_noise_scale", t.measurement_noise_scale);
  if (!t.valid()) r.fail(path, "invalid tracker parameters");
}

json tracker_json(const tracker::TrackerParams& t) {
  return {{"n_init", t.n_init},
          {"max_age", t.max_age},
          {"gating_threshold", t.gating_threshold},
          {"appearance_threshold", t.appearance_threshold},
          {"lambda_motion", t.lambda_motion},
          {"iou_threshold", t.iou_threshold},
          {"gallery_size", t.gallery_size},
          {"process_noise_scale", t.process_noise_scale},
          {"measurement_noise_scale", t.measurement_noise_scale}};
}

world::Pedestrian read_pedestrian(const Reader& r, const json& obj, const std::string& path) {
  r.expect_object(obj, path, {"id", "start", "waypoints", "speed", "height", "shoulder_width", "spawn_time",
                              "waypoint_index"});
  world::Pedestrian p;
  p.id = r.as_string(*r.find(obj, path, "id", true), join(path, "id"));
  p.position = r.as_point(*r.find(obj, path, "start", true), join(path, "start"));
  const json& wps = *r.find(obj, path, "waypoints", true);
  const std::string wp_path = join(path, "waypoints");
  if (!wps.is_array()) r.fail(wp_path, "expected an array of points");
  for (std::size_t i = 0; i < wps.size(); ++i) p.waypoints.push_back(r.as_point(wps[i], index_path(wp_path, i)));
  r.opt(obj, path, "speed", p.speed);
  r.opt(obj, path, "height", p.height);
  r.opt(obj, path, "shoulder_width", p.shoulder_width);
  r.opt(obj, path, "spawn_time", p.spawn_time);
  r.opt(obj, path, "waypoint_index", p.waypoint_index);
  return p;
}

sim::ScenarioConfig read_scenario(const Reader& r) {
  const json& root = r.root();
  r.expect_object(root, "",
                  {"schema", "name", "dt", "max_steps", "seed", "target", "world", "robot", "pedestrians", "camera",
                   "noise", "tracker", "follow", "apf", "success"});
  const std::string schema = r.as_string(*r.find(root, "", "schema", true), "schema");
  if (schema != kSchema) r.fail("schema", "unsupported schema '" + schema + "', expected '" + kSchema + "'");

  sim::ScenarioConfig c;
  c.name = r.as_string(*r.find(root, "", "name", true), "name");
  c.dt = r.as_double(*r.find(root, "", "dt", true), "dt");
  c.max_steps = static_cast<std::size_t>(r.as_u64(*r.find(root, "", "max_steps", true), "max_steps"));
  c.rng_seed = r.as_u64(*r.find(root, "", "seed", true), "seed");
  c.target_id = r.as_string(*r.find(root, "", "target", true), "target");

  const json& wo = *r.find(root, "", "world", true);
  r.expect_object(wo, "world", {"bounds", "shelves"});
  c.bounds = r.as_rect(*r.find(wo, "world", "bounds", true), "world.bounds");
  if (const json* shelves = r.find(wo, "world", "shelves", false)) {
    if (!shelves->is_array()) r.fail("world.shelves", "expected an array of rectangles");
    for (std::size_t i = 0; i < shelves->size(); ++i) {
      c.shelves.push_back(r.as_rect((*shelves)[i], index_path("world.shelves", i)));
    }
  }

  const json& ro = *r.find(root, "", "robot", true);
  r.expect_object(ro, "robot", {"pose", "radius", "max_speed", "max_turn_rate"});
  const json& pose = *r.find(ro, "robot", "pose", true);
  r.expect_object(pose, "robot.pose", {"x", "y", "theta"});
  c.robot.pose.x = r.as_double(*r.find(pose, "robot.pose", "x", true), "robot.pose.x");
  c.robot.pose.y = r.as_double(*r.find(pose, "robot.pose", "y", true), "robot.pose.y");
  c.robot.pose.theta = r.as_double(*r.find(pose, "robot.pose", "theta", true), "robot.pose.theta");
  r.opt(ro, "robot", "radius", c.robot.radius);
  r.opt(ro, "robot", "max_speed", c.robot.max_speed);
  r.opt(ro, "robot", "max_turn_rate", c.robot.max_turn_rate);

  const json& peds = *r.find(root, "", "pedestrians", true);
  if (!peds.is_array()) r.fail("pedestrians", "expected an array");
  for (std::size_t i = 0; i < peds.size(); ++i) {
    c.pedestrians.push_back(read_pedestrian(r, peds[i], index_path("pedestrians", i)));
  }

  if (const json* cam = r.find(root, "", "camera", false)) {
    r.expect_object(*cam, "camera",
                    {"focal_px", "image_width", "image_height", "max_depth", "mount_height", "occlusion_fraction"});
    r.opt(*cam, "camera", "focal_px", c.camera.focal_px);
    r.opt(*cam, "camera", "image_width", c.camera.image_width);
    r.opt(*cam, "camera", "image_height", c.camera.image_height);
    r.opt(*cam, "camera", "max_depth", c.camera.max_depth);
    r.opt(*cam, "camera", "mount_height", c.camera.mount_height);
    r.opt(*cam, "camera", "occlusion_fraction", c.camera.occlusion_fraction);
  }
  if (const json* noise = r.find(root, "", "noise", false)) {
    r.expect_object(*noise, "noise", {"pixel_sigma", "depth_sigma", "feature_sigma", "miss_rate", "feature_dim"});
    r.opt(*noise, "noise", "pixel_sigma", c.noise.pixel_sigma);
    r.opt(*noise, "noise", "depth_sigma", c.noise.depth_sigma);
    r.opt(*noise, "noise", "feature_sigma", c.noise.feature_sigma);
    r.opt(*noise, "noise", "miss_rate", c.noise.miss_rate);
    r.opt(*noise, "noise", "feature_dim", c.noise.feature_dim);
  }
  c.noise.rng_seed = c.rng_seed;
  if (const json* t = r.find(root, "", "tracker", false)) read_tracker(r, *t, "tracker", c.tracker);
  if (const json* f = r.find(root, "", "follow", false)) {
    r.expect_object(*f, "follow",
                    {"center_deadband", "desired_distance", "distance_deadband", "k_linear", "max_speed", "turn_rate",
                     "width_tolerance", "center_tolerance", "search_patience"});
    r.opt(*f, "follow", "center_deadband", c.follow.center_deadband);
    r.opt(*f, "follow", "desired_distance", c.follow.desired_distance);
    r.opt(*f, "follow", "distance_deadband", c.follow.distance_deadband);
    r.opt(*f, "follow", "k_linear", c.follow.k_linear);
    r.opt(*f, "follow", "max_speed", c.follow.max_speed);
    r.opt(*f, "follow", "turn_rate", c.follow.turn_rate);
    r.opt(*f, "follow", "width_tolerance", c.follow.width_tolerance);
    r.opt(*f, "follow", "center_tolerance", c.follow.center_tolerance);
    r.opt(*f, "follow", "search_patience", c.follow.search_patience);
  }
  if (const json* a = r.find(root, "", "apf", false)) {
    r.expect_object(*a, "apf",
                    {"k_att", "k_rep", "rho0", "force_cap", "blend_distance", "local_min_epsilon", "goal_radius", "k_v",
                     "k_omega"});
    r.opt(*a, "apf", "k_att", c.apf.k_att);
    r.opt(*a, "apf", "k_rep", c.apf.k_rep);
    r.opt(*a, "apf", "rho0", c.apf.rho0);
    r.opt(*a, "apf", "force_cap", c.apf.force_cap);
    r.opt(*a, "apf", "blend_distance", c.apf.blend_distance);
    r.opt(*a, "apf", "local_min_epsilon", c.apf.local_min_epsilon);
    r.opt(*a, "apf", "goal_radius", c.apf.goal_radius);
    r.opt(*a, "apf", "k_v", c.apf.k_v);
    r.opt(*a, "apf", "k_omega", c.apf.k_omega);
  }
  if (const json* s = r.find(root, "", "success", false)) {
    r.expect_object(*s, "success", {"min_clearance", "max_final_distance"});
    r.opt(*s, "success", "min_clearance", c.success.min_clearance);
    r.opt(*s, "success", "max_final_distance", c.success.max_final_distance);
  }

  try {
    sim::validate(c);
  } catch (const ConfigError& e) {
    // Semantic checks know the field but not the line; look it up.
    const std::string what = e.what();
    const std::string prefix = e.field() + ": ";
    r.fail(e.field(), what.starts_with(prefix) ? what.substr(prefix.size()) : what);
  }
  return c;
}

json point_json(Vec2 p) { return json::array({p.x, p.y}); }
json rect_json(const world::Rect& r) { return json::array({r.min_x, r.min_y, r.max_x, r.max_y}); }

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path.string() + "'");
  return ss.str();
}

sim::ScenarioConfig parse_scenario(std::string_view text) {
  const Parsed doc = parse_document(text);
  return read_scenario(Reader(doc.root, doc.lines));
}

sim::ScenarioConfig load_scenario(const std::filesystem::path& path) { return parse_scenario(read_text(path)); }

std::string serialize_scenario(const sim::ScenarioConfig& c) {
  json peds = json::array();
  for (const auto& p : c.pedestrians) {
    json wps = json::array();
    for (const auto& w : p.waypoints) wps.push_back(point_json(w));
    peds.push_back({{"id", p.id},
                    {"start", point_json(p.position)},
                    {"waypoints", wps},
                    {"speed", p.speed},
                    {"height", p.height},
                    {"shoulder_width", p.shoulder_width},
                    {"spawn_time", p.spawn_time},
                    {"waypoint_index", p.waypoint_index}});
  }
  json shelves = json::array();
  for (const auto& s : c.shelves) shelves.push_back(rect_json(s));

  json doc = {
      {"schema", kSchema},
      {"name", c.name},
      {"dt", c.dt},
      {"max_steps", c.max_steps},
      {"seed", c.rng_seed},
      {"target", c.target_id},
      {"world", {{"bounds", rect_json(c.bounds)}, {"shelves", shelves}}},
      {"robot",
       {{"pose", {{"x", c.robot.pose.x}, {"y", c.robot.pose.y}, {"theta", c.robot.pose.theta}}},
        {"radius", c.robot.radius},
        {"max_speed", c.robot.max_speed},
        {"max_turn_rate", c.robot.max_turn_rate}}},
      {"pedestrians", peds},
      {"camera",
       {{"focal_px", c.camera.focal_px},
        {"image_width", c.camera.image_width},
        {"image_height", c.camera.image_height},
        {"max_depth", c.camera.max_depth},
        {"mount_height", c.camera.mount_height},
        {"occlusion_fraction", c.camera.occlusion_fraction}}},
      {"noise",
       {{"pixel_sigma", c.noise.pixel_sigma},
        {"depth_sigma", c.noise.depth_sigma},
        {"feature_sigma", c.noise.feature_sigma},
        {"miss_rate", c.noise.miss_rate},
        {"feature_dim", c.noise.feature_dim}}},
      {"tracker", tracker_json(c.tracker)},
      {"follow",
       {{"center_deadband", c.follow.center_deadband},
        {"desired_distance", c.follow.desired_distance},
        {"distance_deadband", c.follow.distance_deadband},
        {"k_linear", c.follow.k_linear},
        {"max_speed", c.follow.max_speed},
        {"turn_rate", c.follow.turn_rate},
        {"width_tolerance", c.follow.width_tolerance},
        {"center_tolerance", c.follow.center_tolerance},
        {"search_patience", c.follow.search_patience}}},
      {"apf",
       {{"k_att", c.apf.k_att},
        {"k_rep", c.apf.k_rep},
        {"rho0", c.apf.rho0},
        {"force_cap", c.apf.force_cap},
        {"blend_distance", c.apf.blend_distance},
        {"local_min_epsilon", c.apf.local_min_epsilon},
        {"goal_radius", c.apf.goal_radius},
        {"k_v", c.apf.k_v},
        {"k_omega", c.apf.k_omega}}},
      {"success",
       {{"min_clearance", c.success.min_clearance}, {"max_final_distance", c.success.max_final_distance}}},
  };
  return doc.dump(2) + "\n";
}

tracker::TrackerParams parse_tracker_params(std::string_view text) {
  const Parsed doc = parse_document(text);
  const Reader r(doc.root, doc.lines);
  if (const json* s = r.find(doc.root, "", "schema", false)) {
    const std::string schema = r.as_string(*s, "schema");
    if (schema != kTrackerSchema) r.fail("schema", "unsupported schema '" + schema + "'");
  }
  tracker::TrackerParams params;
  read_tracker(r, doc.root, "", params);
  return params;
}

std::string serialize_tracker_params(const tracker::TrackerParams& params) {
  json doc = tracker_json(params);
  doc["schema"] = kTrackerSchema;
  return doc.dump(2) + "\n";
}

}  // namespace wfollow::config
