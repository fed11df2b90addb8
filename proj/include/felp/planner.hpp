#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "felp/spiral.hpp"
#include "felp/traffic.hpp"

namespace felp {

enum class Variant { Felp, CFelp, RFelp };

const char* to_string(Variant variant);
Variant parse_variant(const std::string& text);
const char* to_string(Prediction prediction);
Prediction parse_prediction(const std::string& text);

struct PlannerConfig {
  Variant variant = Variant::Felp;
  Prediction prediction = Prediction::Idm;
  int n0 = 20;  // front edges per primitive
  CostConfig cost;
  RolloutOptions rollout;
  SpiralOptions spiral;
  /// Re-simulate the chosen sequence with traces recorded.
  bool record_expected_trace = false;

  /// Number of stages s_m / (n0 r0). Throws if s_m is not a multiple.
  int stages(double r0) const;
};

/// Search node: traffic state at a waypoint with its cost-to-come.
struct Snapshot {
  TrafficState traffic;
  VertexIndex vertex = kNoVertex;
  double cost_to_come = 0.0;
  int parent = -1;
  int stage = 0;
  int lane_changes = 0;
  bool reached = true;    // false: the ego stalled short of the end point
  bool dead_end = false;  // no option passes the map constraints here
  bool alive = true;      // false once displaced (R-FELP)
  std::optional<EndpointOption> primitive;
  PlacedPath path;
};

struct PlannerStats {
  std::size_t rollouts = 0;
  std::size_t bvp_failures = 0;
  std::size_t collisions_pruned = 0;
  std::size_t constraint_rejections = 0;
  std::size_t snapshots = 0;
  std::size_t terminals = 0;
  double wall_ms = 0.0;
};

struct PlanResult {
  Variant variant = Variant::Felp;
  std::vector<EndpointOption> primitives;  // execution order
  std::vector<PlacedPath> paths;
  std::vector<RolloutResult> expected;     // only with record_expected_trace
  std::vector<VertexIndex> waypoints;      // root projection first
  double cost_to_come = 0.0;
  double terminal_cost = 0.0;
  double total_cost = 0.0;
  PlannerStats stats;
};

/// Raised when every option from the root collides.
class NoPlanError : public Error {
 public:
  using Error::Error;
};

/// Map constraints between consecutive end points: the number of shortest
/// paths must equal |dl|/w0 * n0 + 1 and their length must not exceed
/// r0 n0 + w0. With the lane band enabled, `next` must also lie within one
/// lane of `root`.
bool satisfy_constraints(const LaneGraph& graph, VertexIndex prev, VertexIndex next, int n0,
                         bool lane_band, VertexIndex root);

/// Searches motion-primitive sequences over the graph. Holds a spiral cache
/// that persists across calls on the same configuration.
class Planner {
 public:
  explicit Planner(PlannerConfig config);

  PlanResult plan(const TrafficState& traffic, const LaneGraph& graph);

  const PlannerConfig& config() const { return config_; }
  const std::deque<Snapshot>& last_snapshots() const { return snapshots_; }

 private:
  PlanResult backtrace(int terminal, const LaneGraph& graph, double terminal_cost_value);

  PlannerConfig config_;
  SpiralCache cache_;
  std::deque<Snapshot> snapshots_;
};

/// Ego-frame origin and starting curvature for expanding `snapshot`.
Pose2 expansion_origin(const Snapshot& snapshot);

}  // namespace felp
