#include "felp/road.hpp"

#include <algorithm>
#include <cmath>

namespace felp {

namespace {

constexpr double kStationEps = 1e-9;

bool covers(double begin, double end, double s) {
  return s >= begin - kStationEps && s <= end + kStationEps;
}

}  // namespace

LanePermission parse_permission(const std::string& text) {
  if (text == "both") return LanePermission::Both;
  if (text == "left") return LanePermission::LeftOnly;
  if (text == "right") return LanePermission::RightOnly;
  if (text == "none") return LanePermission::None;
  throw InvalidArgument("unknown lane permission '" + text + "' (expected both|left|right|none)");
}

std::string to_string(LanePermission permission) {
  switch (permission) {
    case LanePermission::Both:
      return "both";
    case LanePermission::LeftOnly:
      return "left";
    case LanePermission::RightOnly:
      return "right";
    case LanePermission::None:
      return "none";
  }
  return "none";
}

void RoadDefinition::validate() const {
  require(lane_count >= 1, "road: lane_count must be >= 1");
  require(lane_width > 0.0, "road: lane_width must be positive");
  require(length > 0.0, "road: length must be positive");
  require(station_step > 0.0, "road: station_step must be positive");
  const double max_offset = lane_width * (lane_count - 1);
  for (const auto& c : curves) {
    require(std::isfinite(c.kappa) && std::isfinite(c.s_begin), "road: non-finite curve segment");
    require(std::abs(c.kappa) * max_offset < 0.9,
            "road: curvature too tight for the outermost lane");
  }
  const auto check_piece = [&](const LanePiece& p, const char* what) {
    require(p.lane >= 0 && p.lane < lane_count, std::string("road: ") + what + " lane out of range");
    require(p.s_begin <= p.s_end, std::string("road: ") + what + " has s_begin > s_end");
  };
  for (const auto& p : lane_pieces) check_piece(p, "lane piece");
  for (const auto& p : off_route) check_piece(p, "off-route range");
  for (const auto& b : boundaries) {
    require(b.right_lane >= 0 && b.right_lane + 1 < lane_count,
            "road: boundary right lane out of range");
    require(b.s_begin <= b.s_end, "road: boundary has s_begin > s_end");
  }
}

SyntheticRoad::SyntheticRoad(RoadDefinition definition) : def_(std::move(definition)) {
  def_.validate();
  std::stable_sort(def_.curves.begin(), def_.curves.end(),
                   [](const CurveSegment& a, const CurveSegment& b) { return a.s_begin < b.s_begin; });
  if (def_.curves.empty() || def_.curves.front().s_begin > 0.0) {
    def_.curves.insert(def_.curves.begin(), CurveSegment{0.0, 0.0});
  }
  // Anything before the first breakpoint is an extension of the first segment.
  def_.curves.front().s_begin = std::min(def_.curves.front().s_begin, 0.0);

  segment_start_.resize(def_.curves.size());
  segment_start_[0] = {0.0, 0.0, 0.0};
  if (def_.curves[0].s_begin < 0.0) {
    // Place the origin at s = 0 by walking the first segment backwards.
    const double ds = def_.curves[0].s_begin;
    const double k = def_.curves[0].kappa;
    const double chord = k == 0.0 ? ds : 2.0 * std::sin(0.5 * k * ds) / k;
    segment_start_[0] = {chord * std::cos(0.5 * k * ds), chord * std::sin(0.5 * k * ds),
                         k * ds};
  }
  for (std::size_t i = 1; i < def_.curves.size(); ++i) {
    const Pose2& a = segment_start_[i - 1];
    const double ds = def_.curves[i].s_begin - def_.curves[i - 1].s_begin;
    const double k = def_.curves[i - 1].kappa;
    const double chord = k == 0.0 ? ds : 2.0 * std::sin(0.5 * k * ds) / k;
    const double mid = a.theta + 0.5 * k * ds;
    segment_start_[i] = {a.x + chord * std::cos(mid), a.y + chord * std::sin(mid),
                         a.theta + k * ds};
  }
}

double SyntheticRoad::snap(double s) const {
  const double snapped = std::round(s / def_.station_step) * def_.station_step;
  return std::abs(snapped - s) < 1e-6 ? snapped : s;
}

Pose2 SyntheticRoad::reference_pose(double s) const {
  auto it = std::upper_bound(def_.curves.begin(), def_.curves.end(), s,
                             [](double value, const CurveSegment& c) { return value < c.s_begin; });
  const std::size_t i = it == def_.curves.begin() ? 0 : static_cast<std::size_t>(it - def_.curves.begin()) - 1;
  const Pose2& a = segment_start_[i];
  const double ds = s - def_.curves[i].s_begin;
  const double k = def_.curves[i].kappa;
  const double chord = k == 0.0 ? ds : 2.0 * std::sin(0.5 * k * ds) / k;
  const double mid = a.theta + 0.5 * k * ds;
  return {a.x + chord * std::cos(mid), a.y + chord * std::sin(mid), wrap_angle(a.theta + k * ds)};
}

double SyntheticRoad::reference_curvature(double s) const {
  auto it = std::upper_bound(def_.curves.begin(), def_.curves.end(), s,
                             [](double value, const CurveSegment& c) { return value < c.s_begin; });
  return it == def_.curves.begin() ? def_.curves.front().kappa : std::prev(it)->kappa;
}

bool SyntheticRoad::lane_exists(int lane, double s) const {
  if (lane < 0 || lane >= def_.lane_count || !covers(0.0, def_.length, s)) return false;
  bool has_pieces = false;
  for (const auto& p : def_.lane_pieces) {
    if (p.lane != lane) continue;
    has_pieces = true;
    if (covers(p.s_begin, p.s_end, s)) return true;
  }
  return !has_pieces;
}

bool SyntheticRoad::lane_continuous(int lane, double s_from, double s_to) const {
  if (lane < 0 || lane >= def_.lane_count) return false;
  if (!covers(0.0, def_.length, s_from) || !covers(0.0, def_.length, s_to)) return false;
  bool has_pieces = false;
  for (const auto& p : def_.lane_pieces) {
    if (p.lane != lane) continue;
    has_pieces = true;
    if (covers(p.s_begin, p.s_end, s_from) && covers(p.s_begin, p.s_end, s_to)) return true;
  }
  return !has_pieces;
}

LanePermission SyntheticRoad::permission(int right_lane, double s) const {
  for (auto it = def_.boundaries.rbegin(); it != def_.boundaries.rend(); ++it) {
    if (it->right_lane == right_lane && covers(it->s_begin, it->s_end, s)) return it->permission;
  }
  return LanePermission::Both;
}

Waypoint SyntheticRoad::make_waypoint(int lane, double s) const {
  const Pose2 ref = reference_pose(s);
  const double k = reference_curvature(s);
  const double l = lane * def_.lane_width;
  Waypoint w;
  w.x = ref.x - l * std::sin(ref.theta);
  w.y = ref.y + l * std::cos(ref.theta);
  w.theta = ref.theta;
  w.kappa = k / (1.0 - k * l);
  w.lane = lane;
  w.s = s;
  w.l = l;
  return w;
}

std::optional<Waypoint> SyntheticRoad::waypoint(int lane, double s) const {
  s = snap(s);
  if (!lane_exists(lane, s)) return std::nullopt;
  return make_waypoint(lane, s);
}

Waypoint SyntheticRoad::require_waypoint(int lane, double s) const {
  auto w = waypoint(lane, s);
  if (!w) {
    throw MapError("road: lane " + std::to_string(lane) + " does not exist at s = " +
                   std::to_string(s));
  }
  return *w;
}

std::vector<Waypoint> SyntheticRoad::front_waypoints(const Waypoint& p, double distance) const {
  require(distance > 0.0, "front_waypoints: distance must be positive");
  const double s_next = snap(p.s + distance);
  if (!lane_continuous(p.lane, p.s, s_next)) return {};
  return {make_waypoint(p.lane, s_next)};
}

std::optional<Waypoint> SyntheticRoad::left_waypoint(const Waypoint& p) const {
  if (!lane_exists(p.lane, p.s) || !lane_exists(p.lane + 1, p.s)) return std::nullopt;
  const LanePermission perm = permission(p.lane, p.s);
  if (perm != LanePermission::Both && perm != LanePermission::LeftOnly) return std::nullopt;
  return make_waypoint(p.lane + 1, p.s);
}

std::optional<Waypoint> SyntheticRoad::right_waypoint(const Waypoint& p) const {
  if (!lane_exists(p.lane, p.s) || !lane_exists(p.lane - 1, p.s)) return std::nullopt;
  const LanePermission perm = permission(p.lane - 1, p.s);
  if (perm != LanePermission::Both && perm != LanePermission::RightOnly) return std::nullopt;
  return make_waypoint(p.lane - 1, p.s);
}

bool SyntheticRoad::on_route(const Waypoint& p) const {
  if (!lane_exists(p.lane, p.s)) return false;
  return std::none_of(def_.off_route.begin(), def_.off_route.end(), [&](const LanePiece& r) {
    return r.lane == p.lane && covers(r.s_begin, r.s_end, p.s);
  });
}

}  // namespace felp
