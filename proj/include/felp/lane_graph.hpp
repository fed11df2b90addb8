#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "felp/kernels.hpp"
#include "felp/road.hpp"
#include "felp/vehicle.hpp"

namespace felp {

/// Stable vertex key: (station index, lane). Ids sort by station, then lane,
/// and do not depend on construction order.
using VertexId = std::uint64_t;

VertexId make_vertex_id(std::int64_t station_index, int lane);
std::int64_t station_index_of(VertexId id);
int lane_of(VertexId id);

/// Dense vertex index inside one finalized graph. kNoVertex marks absence.
using VertexIndex = std::int32_t;
inline constexpr VertexIndex kNoVertex = -1;

struct GraphConfig {
  double r0 = 1.0;    // longitudinal resolution, m
  double rm = 150.0;  // longitudinal range, m
  double w0 = 3.7;    // lane width (lateral edge length), m
};

enum class EdgeKind { Front, Left, Right };

struct Edge {
  VertexIndex from;
  VertexIndex to;
  EdgeKind kind;
};

struct FrenetPoint {
  double s = 0.0;
  double l = 0.0;
};

/// Result of a shortest-path query between two vertices.
struct PathSummary {
  double length = INFINITY;  // d(p, q); +inf when unreachable
  std::uint64_t count = 0;   // phi(p, q); 0 when unreachable
};

/// Directed waypoint graph with front/left/right edges. Construction and the
/// incremental updates mutate; every query runs on the finalized dense arrays,
/// so a const LaneGraph is safe to share between readers.
class LaneGraph {
 public:
  static LaneGraph build(const RoadProvider& road, const Waypoint& p0, const GraphConfig& config);

  /// Grows the graph `delta` meters forward from the exit vertices.
  void extend(const RoadProvider& road, double delta);
  /// Drops every vertex within `delta` meters of the entrance side.
  void shorten(double delta);

  const GraphConfig& config() const { return config_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  VertexId id(VertexIndex v) const { return ids_[static_cast<std::size_t>(v)]; }
  const Waypoint& waypoint(VertexIndex v) const { return waypoints_[static_cast<std::size_t>(v)]; }
  /// Longitudinal distance from the entrance side, in meters.
  double range(VertexIndex v) const;
  VertexIndex find(VertexId id) const;

  VertexIndex front(VertexIndex v) const { return front_[static_cast<std::size_t>(v)]; }
  VertexIndex back(VertexIndex v) const { return back_[static_cast<std::size_t>(v)]; }
  VertexIndex left(VertexIndex v) const { return left_[static_cast<std::size_t>(v)]; }
  VertexIndex right(VertexIndex v) const { return right_[static_cast<std::size_t>(v)]; }
  /// Vertex at the same station on the lane `lane_offset` lanes to the left,
  /// whether or not a lateral edge reaches it.
  VertexIndex beside(VertexIndex v, int lane_offset) const;
  /// Follows `count` front edges; kNoVertex if the chain ends first.
  VertexIndex front_n(VertexIndex v, int count) const;

  const std::vector<VertexIndex>& entrance() const { return entrance_; }
  const std::vector<VertexIndex>& exit() const { return exit_; }
  std::vector<Edge> edges() const;

  /// Euclidean-nearest vertex; ties go to the lowest id. Throws MapError on
  /// an empty graph.
  VertexIndex nearest(double x, double y) const;
  /// (s, l) of the nearest vertex.
  FrenetPoint frenet(double x, double y) const;
  /// Station of (x, y) refined along the tangent of vertex `near`.
  double continuous_s(double x, double y, VertexIndex near) const;

  double shortest_path_length(VertexIndex p, VertexIndex q) const;
  std::uint64_t shortest_path_count(VertexIndex p, VertexIndex q) const;
  /// d and phi together. Paths longer than `bound` are not explored, so the
  /// result reads as unreachable when d > bound.
  PathSummary shortest_paths(VertexIndex p, VertexIndex q,
                             double bound = INFINITY) const;

  /// Appends to `out` the vertices whose centers lie inside `rect`, ascending.
  void vertices_in_rect(const kernels::OrientedRect& rect, std::vector<VertexIndex>& out) const;

 private:
  struct Node {
    Waypoint waypoint;
    std::int64_t range_steps = 0;
    std::optional<VertexId> front, left, right;
  };

  void grow(const RoadProvider& road, std::vector<VertexId> queue);
  void finalize();
  std::int64_t station_index(double s) const;
  std::int64_t max_steps() const;

  GraphConfig config_;
  std::map<VertexId, Node> nodes_;

  // Dense, finalized view.
  std::vector<VertexId> ids_;
  std::vector<Waypoint> waypoints_;
  std::vector<std::int64_t> range_steps_;
  std::vector<VertexIndex> front_, back_, left_, right_;
  std::vector<VertexIndex> entrance_, exit_;

  // Uniform grid over vertex centers, cells in CSR form with SoA coordinates.
  double cell_size_ = 8.0;
  double grid_x0_ = 0.0, grid_y0_ = 0.0;
  std::int64_t grid_nx_ = 0, grid_ny_ = 0;
  std::vector<std::uint32_t> cell_start_;
  std::vector<double> cell_xs_, cell_ys_;
  std::vector<VertexIndex> cell_vertex_;
};

/// Bumper-to-bumper relation to another vehicle.
struct Neighbor {
  int vehicle = -1;
  double gap = 0.0;  // m
};

enum class LaneSide { Same, Left, Right };

/// Which vehicles occupy which vertices. Independent from the graph so that
/// rollouts can work on private copies. Slots are small integers (< 64).
class OccupancyRegistry {
 public:
  static constexpr int kMaxVehicles = 64;
  static constexpr double kMargin = 0.5;  // inflation on every side, m
  static constexpr double kPerceptionRange = 100.0;

  explicit OccupancyRegistry(const LaneGraph& graph);

  /// Vertices covered by the footprint (inflated), at least the nearest one.
  /// Throws MapError when the vehicle is off the graph.
  std::vector<VertexIndex> footprint(const VehicleState& state,
                                     const VehicleFootprint& footprint) const;

  /// Registers (or moves) a vehicle and returns its vertices. Throws MapError
  /// when off the graph.
  const std::vector<VertexIndex>& register_vehicle(int slot, const VehicleState& state,
                                                   const VehicleFootprint& footprint);
  /// Same, but an off-graph vehicle is deregistered and false returned.
  bool try_register(int slot, const VehicleState& state, const VehicleFootprint& footprint);
  void deregister(int slot);

  bool registered(int slot) const { return slots_[check(slot)].registered; }
  const std::vector<VertexIndex>& occupied(int slot) const { return slots_[check(slot)].vertices; }
  std::uint64_t occupants(VertexIndex v) const { return mask_[static_cast<std::size_t>(v)]; }
  /// Continuous station of the vehicle center.
  double station(int slot) const { return slots_[check(slot)].s; }
  /// State the vehicle was registered with.
  const VehicleState& state(int slot) const { return slots_[check(slot)].state; }
  /// True when the two vehicles share at least one vertex.
  bool overlaps(int a, int b) const;
  /// Bitmask of vehicles sharing a vertex with `slot`.
  std::uint64_t overlapping(int slot) const;
  /// Distinct lanes among the vehicle's occupied vertices.
  std::vector<int> lanes(int slot) const;

  /// Closest registered vehicle ahead on the chosen lane, found by walking
  /// front edges from the vertex nearest the front bumper.
  std::optional<Neighbor> leader_of(int slot, LaneSide side = LaneSide::Same) const;
  /// Mirror of leader_of along back edges from the rear bumper.
  std::optional<Neighbor> follower_of(int slot, LaneSide side = LaneSide::Same) const;
  /// Same searches on an absolute lane id.
  std::optional<Neighbor> leader_on_lane(int slot, int lane) const;
  std::optional<Neighbor> follower_on_lane(int slot, int lane) const;

  const LaneGraph& graph() const { return *graph_; }

  bool operator==(const OccupancyRegistry& other) const;

 private:
  struct Slot {
    bool registered = false;
    VehicleState state;
    VehicleFootprint footprint;
    double s = 0.0;
    std::vector<VertexIndex> vertices;
  };

  static std::size_t check(int slot);
  bool compute(const VehicleState& state, const VehicleFootprint& footprint,
               std::vector<VertexIndex>& out, double& s) const;
  std::optional<Neighbor> search(int slot, std::optional<int> lane, int offset, bool forward) const;

  const LaneGraph* graph_;
  std::vector<std::uint64_t> mask_;
  std::array<Slot, kMaxVehicles> slots_;
};

}  // namespace felp
