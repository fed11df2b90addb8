#pragma once

#include <optional>
#include <vector>

#include "felp/idm.hpp"
#include "felp/lane_graph.hpp"
#include "felp/spiral.hpp"

namespace felp {

/// A lane-following vehicle driven by IDM.
struct Agent {
  int id = 0;  // stable identifier used in traces
  int lane = 0;
  VehicleState state;
  VehicleFootprint footprint;
  IdmParams params;
};

struct TrafficState {
  VehicleState ego;
  VehicleFootprint ego_footprint;
  IdmParams ego_params;  // v0 acts as the ego's desired speed
  double ego_kappa = 0.0;  // curvature the ego is currently steering
  std::vector<Agent> agents;
  double time = 0.0;
};

/// Occupancy slot of the ego; agent i lives in slot i + 1.
inline constexpr int kEgoSlot = 0;
inline int agent_slot(std::size_t index) { return static_cast<int>(index) + 1; }

/// Registers every vehicle. The ego must be on the graph; agents that are not
/// are left unregistered and drive on the free road.
void register_traffic(OccupancyRegistry& registry, const TrafficState& traffic);

struct CostConfig {
  double w_a = 0.3;        // ego acceleration
  double w_h = 1.0;        // headway shortfall
  double t_safe = 1.0;     // s
  double w_b = 0.5;        // agent braking beyond comfort
  double b_comfort = 2.0;  // m/s^2
  double w_v = 1.0;        // terminal speed error
  double w_d = 0.1;        // per meter of horizon not travelled
  double v_des = 20.0;     // m/s
  double s_m = 100.0;      // planning horizon, m
};

enum class Prediction { Idm, ConstantVelocity };

struct RolloutOptions {
  double dt = kDefaultTimeStep;
  double t_max = 30.0;
  Prediction prediction = Prediction::Idm;
  VehicleLimits limits;
  bool record_trace = false;
};

/// Gains of the agents' lane-centering law
///   kappa = kappa_lane - k_offset * e_lat - k_heading * e_heading.
struct LaneKeepGains {
  double k_offset = 0.01;
  double k_heading = 0.14;
};

/// Lane-centering curvature toward `lane` at the vertex nearest `state`.
/// Throws MapError when that station has no vertex on `lane`.
double lane_keep_curvature(const VehicleState& state, int lane, const LaneGraph& graph,
                           const VehicleLimits& limits = {}, const LaneKeepGains& gains = {});

/// IDM acceleration against `leader`; an overlapping leader gives a_min.
double idm_or_brake(double v, const std::optional<Neighbor>& leader,
                    const OccupancyRegistry& registry, const IdmParams& params,
                    const VehicleLimits& limits = {});

/// Agent control: lane-centering curvature and IDM acceleration against the
/// same-lane leader. Throws MapError when the agent has no vertex on its lane.
VehicleControl agent_policy(std::size_t agent_index, const TrafficState& traffic,
                            const OccupancyRegistry& registry, const VehicleLimits& limits = {},
                            const LaneKeepGains& gains = {});

/// Ego control: curvature of `path` at `progress`, IDM acceleration against
/// the vehicle ahead of the front bumper. Overlap with the leader yields the
/// strongest braking.
VehicleControl ego_policy(const TrafficState& traffic, const PlacedPath& path, double progress,
                          const OccupancyRegistry& registry, const VehicleLimits& limits = {});

/// Running cost rate for one instant.
/// `headway_gap` is the bumper gap to the ego's leader, if any.
double running_cost(double ego_speed, double ego_accel, std::optional<double> headway_gap,
                    const std::vector<double>& agent_accels, const CostConfig& cfg);

/// Terminal cost given the ego's final speed and the station travelled since
/// the root of the search.
double terminal_cost(double v_end, double travelled_s, const CostConfig& cfg);

struct TrafficFrame {
  double time = 0.0;
  VehicleState ego;
  double ego_accel = 0.0;
  std::vector<VehicleState> agents;
  std::vector<double> agent_accels;
};

struct RolloutResult {
  TrafficState end_state;
  bool reached_endpoint = false;
  bool collision = false;
  VertexIndex end_vertex = kNoVertex;
  Waypoint actual_endpoint;
  double stage_cost = 0.0;
  double agent_brake_min = 0.0;  // most negative agent acceleration, 0 if none braked
  double duration = 0.0;
  std::vector<TrafficFrame> trace;
};

/// Scratch space reused between rollouts on the same graph.
class RolloutWorkspace {
 public:
  explicit RolloutWorkspace(const LaneGraph& graph) : registry_(graph) {}
  OccupancyRegistry& registry() { return registry_; }

 private:
  OccupancyRegistry registry_;
};

/// Simulates the traffic while the ego tracks `path` to its end vertex
/// `target`. Stops on reaching the end, on collision, or after t_max. On
/// reaching the end the ego pose is set to the path's end pose, which removes
/// integration drift of order 1e-9 m between consecutive primitives.
RolloutResult rollout(const TrafficState& traffic, const PlacedPath& path, VertexIndex target,
                      const LaneGraph& graph, const CostConfig& cost,
                      const RolloutOptions& options, RolloutWorkspace& workspace);

/// Rollout in which agents keep their speed and lane.
RolloutResult predict_constant_velocity(const TrafficState& traffic, const PlacedPath& path,
                                        VertexIndex target, const LaneGraph& graph,
                                        const CostConfig& cost, RolloutOptions options,
                                        RolloutWorkspace& workspace);

/// Advances every vehicle by one step of length `h` under the given controls.
void advance(TrafficState& traffic, const VehicleControl& ego_control,
             const std::vector<VehicleControl>& agent_controls, double h);

}  // namespace felp
