#pragma once

// Independent reference implementations used by the unit and acceptance
// suites. Nothing here calls into the code paths it is meant to check.

#include <cstdint>
#include <random>
#include <vector>

#include "felp/idm.hpp"
#include "felp/lane_graph.hpp"
#include "felp/planner.hpp"
#include "felp/road.hpp"
#include "felp/spiral.hpp"
#include "felp/traffic.hpp"

namespace felp::oracle {

/// Car-following law written out term by term, no clamping.
double reference_idm(double v, double gap, double dv, const IdmParams& p);

/// Fine trapezoid integration of the unit-speed kinematics along `path`,
/// independent of the solver's quadrature.
Pose2 integrate_spiral(const SpiralPath& path, int steps = 20000);

/// Straight grid road described cell by cell: station i sits at x = i r0,
/// lane j at y = j w0. Every connection is listed explicitly.
class TableRoad final : public RoadProvider {
 public:
  TableRoad(int stations, int lanes, double r0, double w0);

  void set_exists(int station, int lane, bool value);
  void set_front(int station, int lane, bool value);
  void set_left(int station, int lane, bool value);
  void set_right(int station, int lane, bool value);

  bool exists(int station, int lane) const;
  bool front(int station, int lane) const;
  bool left(int station, int lane) const;
  bool right(int station, int lane) const;

  int stations() const { return stations_; }
  int lanes() const { return lanes_; }
  Waypoint at(int station, int lane) const;

  std::vector<Waypoint> front_waypoints(const Waypoint& p, double distance) const override;
  std::optional<Waypoint> left_waypoint(const Waypoint& p) const override;
  std::optional<Waypoint> right_waypoint(const Waypoint& p) const override;
  bool on_route(const Waypoint& p) const override;

 private:
  std::size_t cell(int station, int lane) const;
  int station_of(const Waypoint& p) const;

  int stations_, lanes_;
  double r0_, w0_;
  std::vector<bool> exists_, front_, left_, right_;
};

/// Random road of at most `max_vertices` cells with random lane gaps and
/// random one-way or blocked lane boundaries. The start cell (0, 0) exists.
TableRoad random_table_road(std::mt19937_64& rng, int max_vertices);

struct PathStats {
  double length = INFINITY;
  std::uint64_t count = 0;
};

/// Depth-first enumeration of every simple path from `from` to `to` in the
/// table road, keeping the shortest length and how many paths attain it.
PathStats enumerate_table_paths(const TableRoad& road, int from_station, int from_lane,
                                int to_station, int to_lane, double r0, double w0);

/// Enumerates every directed path of length <= `bound` in the graph's edge
/// list starting at `from` and reports the shortest ones reaching `to`.
PathStats enumerate_bounded_paths(const LaneGraph& graph, VertexIndex from, VertexIndex to,
                                  double bound);

/// Linear scan for the nearest vertex, ties to the lowest id.
VertexIndex brute_nearest(const LaneGraph& graph, double x, double y);

/// Minimum total cost over every constraint-satisfying primitive sequence,
/// each re-simulated from the root.
double brute_force_plan_cost(const TrafficState& traffic, const LaneGraph& graph,
                             const PlannerConfig& config);

/// Straight multi-lane road with every boundary dashed.
RoadDefinition straight_road(int lanes, double length = 2000.0, double width = 3.7);

/// Ego at the given lane and station with speed v and the default IDM
/// parameters, no agents.
TrafficState ego_only(const SyntheticRoad& road, int lane, double s, double v);

Agent make_agent(const SyntheticRoad& road, int id, int lane, double s, double v,
                 IdmParams params = {});

/// Road, map and initial traffic for one planning call.
struct PlanningScene {
  SyntheticRoad road;
  LaneGraph graph;
  TrafficState traffic;
};

/// Dashed straight or gently curved road with `lanes` lanes, the ego at a
/// random lane and speed, and up to `max_agents` agents placed without
/// overlap. The map covers 40 m behind the ego to 40 m past `horizon`.
PlanningScene random_planning_scene(std::mt19937_64& rng, int lanes, int max_agents,
                                    double horizon);

}  // namespace felp::oracle
