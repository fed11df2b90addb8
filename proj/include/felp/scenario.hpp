#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "felp/config.hpp"
#include "felp/metrics.hpp"
#include "felp/planner.hpp"
#include "felp/road.hpp"

namespace felp {

enum class ScenarioKind { Merging, Highway, Density };

const char* to_string(ScenarioKind kind);
ScenarioKind parse_scenario(const std::string& text);

/// Per-episode randomization of the agents.
struct NoiseConfig {
  double jitter = 0.1;     // uniform +-fraction on every IDM parameter
  double ou_theta = 0.05;  // 1/s, mean reversion of the desired-speed offset
  double ou_sigma = 0.5;   // m/s per sqrt(s)
  double ou_clamp = 3.0;   // m/s
};

/// Initial merging scene, offsets measured center to center along s.
struct MergeScene {
  double leader_offset = 20.0;
  double leader_v0 = 15.0;  // keeps the leader at the ego's speed
  double left_ahead = 20.0;
  double left_behind = 20.0;
  double left_speed = 20.0;
  double cap = 30.0;  // s
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Highway;
  RoadDefinition road;
  double r0 = 1.0;
  double graph_behind = 50.0;  // map kept around the ego, m
  double graph_ahead = 115.0;
  double traffic_behind = 50.0;  // agent window, m
  double traffic_ahead = 100.0;
  double duration = 300.0;
  double replan_period = 0.25;
  int agent_count = 8;
  std::uint64_t seed = 1;
  double spawn_deadlock = 10.0;  // s without a feasible spawn before aborting
  PlannerConfig planner;
  IdmParams ego_idm;
  IdmParams agent_idm;
  NoiseConfig noise;
  int ego_lane = 1;
  double ego_s = 100.0;
  double ego_speed = 20.0;
  MergeScene merge;
  std::vector<int> density_counts{4, 8, 12};

  /// Reads every known key and rejects unknown ones.
  static ScenarioConfig from_file(const ConfigFile& file);
  /// Throws InvalidArgument on inconsistent settings.
  void validate() const;
};

/// One row of trace.csv.
struct TraceRow {
  double time = 0.0;
  int vehicle_id = 0;  // 0 is the ego
  double x = 0.0, y = 0.0, theta = 0.0, v = 0.0, a = 0.0;
};

/// One record of planner_stats.jsonl.
struct PlanRecord {
  double time = 0.0;
  int agents = 0;
  bool fallback = false;  // the planner found no collision-free option
  double total_cost = 0.0;
  std::vector<Maneuver> maneuvers;
  PlannerStats stats;
};

struct RunResult {
  ScenarioKind kind = ScenarioKind::Highway;
  Variant variant = Variant::Felp;
  Prediction prediction = Prediction::Idm;
  int agent_count = 0;
  std::uint64_t seed = 0;
  MetricsReport metrics;
  std::vector<EgoSample> samples;
  std::vector<TraceRow> trace;
  std::vector<PlanRecord> plans;
  int lane_changes = 0;
  std::optional<double> first_lane_change;  // time the ego settled in a new lane
  int max_window_violations = 0;            // agents outside the window after spawning
  std::optional<LaneGraph> initial_graph;
  VehicleFootprint ego_footprint;
  VehicleFootprint agent_footprint;
};

class SpawnDeadlock : public Error {
 public:
  using Error::Error;
};

/// Merging scene on lane 0 with the target lane to its left. Stops when the
/// ego occupies only the target lane or at the time cap.
RunResult run_merging(const ScenarioConfig& config);

/// Receding-horizon run with agents kept inside the window around the ego.
RunResult run_highway(const ScenarioConfig& config);

/// run_highway once per agent count, same seed.
std::vector<RunResult> run_density_sweep(const ScenarioConfig& config);

/// Single plan from the initial scene of `config`.
PlanResult plan_once(const ScenarioConfig& config, LaneGraph* graph_out = nullptr);

/// Least-squares line through (x, y); returns R^2.
double linear_fit_r2(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace felp
