#pragma once

#include <optional>
#include <string>
#include <vector>

#include "felp/common.hpp"

namespace felp {

/// A sample on a lane center. `s` is the station along the road reference
/// line (lane 0 center), `l` the signed lateral offset (left positive).
struct Waypoint {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double kappa = 0.0;
  int lane = 0;
  double s = 0.0;
  double l = 0.0;

  Pose2 pose() const { return {x, y, theta}; }
};

/// The only interface the map builder needs from the outside world.
class RoadProvider {
 public:
  virtual ~RoadProvider() = default;

  /// Waypoints `distance` meters ahead of `p`, one per successor lane.
  virtual std::vector<Waypoint> front_waypoints(const Waypoint& p, double distance) const = 0;
  /// Waypoint beside `p` on the lane to its left if a lane change there is legal.
  virtual std::optional<Waypoint> left_waypoint(const Waypoint& p) const = 0;
  virtual std::optional<Waypoint> right_waypoint(const Waypoint& p) const = 0;
  virtual bool on_route(const Waypoint& p) const = 0;
};

/// Which lane changes a lane boundary allows. `LeftOnly` permits moving from
/// the right lane of the boundary into the left one.
enum class LanePermission { Both, LeftOnly, RightOnly, None };

LanePermission parse_permission(const std::string& text);
std::string to_string(LanePermission permission);

struct CurveSegment {
  double s_begin = 0.0;  // curvature applies from here to the next segment
  double kappa = 0.0;
};

struct LanePiece {
  int lane = 0;
  double s_begin = 0.0;
  double s_end = 0.0;
};

struct BoundaryRule {
  int right_lane = 0;  // boundary between right_lane and right_lane + 1
  double s_begin = 0.0;
  double s_end = 0.0;
  LanePermission permission = LanePermission::Both;
};

/// Multi-lane road with a piecewise-constant-curvature reference line.
/// Lane i is centered at l = i * lane_width; lane 0 is the rightmost.
struct RoadDefinition {
  int lane_count = 3;
  double lane_width = 3.7;
  double length = 10000.0;
  double station_step = 1.0;  // waypoint spacing along s
  std::vector<CurveSegment> curves;
  /// A lane that appears here exists only inside its listed pieces.
  std::vector<LanePiece> lane_pieces;
  /// Later rules take precedence; uncovered boundaries allow both directions.
  std::vector<BoundaryRule> boundaries;
  std::vector<LanePiece> off_route;

  /// Throws InvalidArgument on an inconsistent definition.
  void validate() const;
};

class SyntheticRoad final : public RoadProvider {
 public:
  explicit SyntheticRoad(RoadDefinition definition);

  std::vector<Waypoint> front_waypoints(const Waypoint& p, double distance) const override;
  std::optional<Waypoint> left_waypoint(const Waypoint& p) const override;
  std::optional<Waypoint> right_waypoint(const Waypoint& p) const override;
  bool on_route(const Waypoint& p) const override;

  /// Lane-center waypoint at station s, or nullopt if the lane is absent there.
  std::optional<Waypoint> waypoint(int lane, double s) const;
  /// Same, but throws MapError instead of returning nullopt.
  Waypoint require_waypoint(int lane, double s) const;

  bool lane_exists(int lane, double s) const;
  LanePermission permission(int right_lane, double s) const;
  /// Reference-line pose and curvature at station s.
  Pose2 reference_pose(double s) const;
  double reference_curvature(double s) const;

  const RoadDefinition& definition() const { return def_; }

 private:
  double snap(double s) const;
  bool lane_continuous(int lane, double s_from, double s_to) const;
  Waypoint make_waypoint(int lane, double s) const;

  RoadDefinition def_;
  std::vector<Pose2> segment_start_;  // reference pose at each curve breakpoint
};

}  // namespace felp
