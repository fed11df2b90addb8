#include "felp/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace felp {

void register_traffic(OccupancyRegistry& registry, const TrafficState& traffic) {
  require(traffic.agents.size() < static_cast<std::size_t>(OccupancyRegistry::kMaxVehicles),
          "traffic: too many agents for the occupancy registry");
  registry.register_vehicle(kEgoSlot, traffic.ego, traffic.ego_footprint);
  for (std::size_t i = 0; i < traffic.agents.size(); ++i) {
    const Agent& a = traffic.agents[i];
    registry.try_register(agent_slot(i), a.state, a.footprint);
  }
}

double idm_or_brake(double v, const std::optional<Neighbor>& leader, const OccupancyRegistry& reg,
                    const IdmParams& params, const VehicleLimits& limits) {
  if (!leader) return idm_acceleration(v, std::nullopt, params, limits);
  if (leader->gap <= 0.0) return limits.a_min;
  const double dv = v - reg.state(leader->vehicle).v;
  return idm_acceleration(v, LeadObservation{leader->gap, dv}, params, limits);
}

double lane_keep_curvature(const VehicleState& state, int lane, const LaneGraph& graph,
                           const VehicleLimits& limits, const LaneKeepGains& gains) {
  VertexIndex v = graph.nearest(state.x, state.y);
  const int nearest_lane = graph.waypoint(v).lane;
  if (nearest_lane != lane) v = graph.beside(v, lane - nearest_lane);
  if (v == kNoVertex) throw MapError("lane keeping: no vertex on lane " + std::to_string(lane));
  const Waypoint& w = graph.waypoint(v);
  const double c = std::cos(w.theta);
  const double s = std::sin(w.theta);
  const double dx = state.x - w.x;
  const double dy = state.y - w.y;
  const double along = dx * c + dy * s;
  const double e_lat = dy * c - dx * s;
  const double e_heading = wrap_angle(state.theta - (w.theta + w.kappa * along));
  const double kappa = w.kappa - gains.k_offset * e_lat - gains.k_heading * e_heading;
  return std::clamp(kappa, -limits.kappa_max, limits.kappa_max);
}

VehicleControl agent_policy(std::size_t agent_index, const TrafficState& traffic,
                            const OccupancyRegistry& registry, const VehicleLimits& limits,
                            const LaneKeepGains& gains) {
  require(agent_index < traffic.agents.size(), "agent_policy: agent index out of range");
  const int slot = agent_slot(agent_index);
  if (!registry.registered(slot)) {
    throw MapError("agent_policy: agent " + std::to_string(agent_index) + " is not on the map");
  }
  const Agent& agent = traffic.agents[agent_index];
  const double kappa = lane_keep_curvature(agent.state, agent.lane, registry.graph(), limits, gains);
  const double a =
      idm_or_brake(agent.state.v, registry.leader_of(slot), registry, agent.params, limits);
  return {kappa, a};
}

VehicleControl ego_policy(const TrafficState& traffic, const PlacedPath& path, double progress,
                          const OccupancyRegistry& registry, const VehicleLimits& limits) {
  if (!(progress >= -1e-9 && progress <= path.length() + 1e-9)) {
    throw InvalidArgument("ego_policy: progress outside the path");
  }
  const double a = idm_or_brake(traffic.ego.v, registry.leader_of(kEgoSlot), registry,
                                traffic.ego_params, limits);
  return {path.curvature_at(progress), a};
}

double running_cost(double ego_speed, double ego_accel, std::optional<double> headway_gap,
                    const std::vector<double>& agent_accels, const CostConfig& cfg) {
  double cost = cfg.w_a * ego_accel * ego_accel;
  if (headway_gap && ego_speed > 1e-9) {
    const double shortfall = std::max(0.0, cfg.t_safe - *headway_gap / ego_speed);
    cost += cfg.w_h * shortfall * shortfall;
  }
  for (double a : agent_accels) {
    const double excess = std::max(0.0, -a - cfg.b_comfort);
    cost += cfg.w_b * excess * excess;
  }
  return cost;
}

double terminal_cost(double v_end, double travelled_s, const CostConfig& cfg) {
  const double dv = v_end - cfg.v_des;
  return cfg.w_v * dv * dv + cfg.w_d * (cfg.s_m - travelled_s);
}

void advance(TrafficState& traffic, const VehicleControl& ego_control,
             const std::vector<VehicleControl>& agent_controls, double h) {
  require(agent_controls.size() == traffic.agents.size(), "advance: one control per agent");
  traffic.ego = step(traffic.ego, ego_control, h);
  for (std::size_t i = 0; i < traffic.agents.size(); ++i) {
    traffic.agents[i].state = step(traffic.agents[i].state, agent_controls[i], h);
  }
  traffic.time += h;
}

namespace {

// Controls of every agent for the current instant.
void agent_controls(const TrafficState& traffic, const OccupancyRegistry& registry,
                    Prediction prediction, const VehicleLimits& limits,
                    std::vector<VehicleControl>& out) {
  out.resize(traffic.agents.size());
  for (std::size_t i = 0; i < traffic.agents.size(); ++i) {
    const Agent& agent = traffic.agents[i];
    if (!registry.registered(agent_slot(i))) {
      // Off the map: keep going straight on the free road.
      const double a = prediction == Prediction::Idm
                           ? idm_acceleration(agent.state.v, std::nullopt, agent.params, limits)
                           : 0.0;
      out[i] = {0.0, a};
      continue;
    }
    try {
      if (prediction == Prediction::Idm) {
        out[i] = agent_policy(i, traffic, registry, limits);
      } else {
        out[i] = {lane_keep_curvature(agent.state, agent.lane, registry.graph(), limits, {}), 0.0};
      }
    } catch (const MapError&) {
      // Its lane is not in the map here (e.g. past a lane end): drive straight.
      const double a = prediction == Prediction::Idm
                           ? idm_acceleration(agent.state.v, std::nullopt, agent.params, limits)
                           : 0.0;
      out[i] = {0.0, a};
    }
  }
}

TrafficFrame frame(const TrafficState& traffic, double ego_a,
                   const std::vector<VehicleControl>& controls) {
  TrafficFrame f;
  f.time = traffic.time;
  f.ego = traffic.ego;
  f.ego_accel = ego_a;
  for (std::size_t i = 0; i < traffic.agents.size(); ++i) {
    f.agents.push_back(traffic.agents[i].state);
    f.agent_accels.push_back(controls[i].a);
  }
  return f;
}

}  // namespace

RolloutResult rollout(const TrafficState& traffic, const PlacedPath& path, VertexIndex target,
                      const LaneGraph& graph, const CostConfig& cost,
                      const RolloutOptions& options, RolloutWorkspace& workspace) {
  require(options.dt > 0.0 && options.t_max > 0.0, "rollout: dt and t_max must be positive");
  require(target >= 0 && static_cast<std::size_t>(target) < graph.size(),
          "rollout: target vertex out of range");
  const Pose2 start = path.start();
  if (std::hypot(start.x - traffic.ego.x, start.y - traffic.ego.y) > 1e-6 ||
      std::abs(wrap_angle(start.theta - traffic.ego.theta)) > 1e-6) {
    throw InvalidArgument("rollout: path does not start at the ego pose");
  }

  OccupancyRegistry& reg = workspace.registry();
  if (&reg.graph() != &graph) reg = OccupancyRegistry(graph);
  for (int slot = 0; slot < OccupancyRegistry::kMaxVehicles; ++slot) {
    if (reg.registered(slot)) reg.deregister(slot);
  }
  register_traffic(reg, traffic);

  RolloutResult result;
  result.end_state = traffic;
  TrafficState& state = result.end_state;
  TrackingState ego{traffic.ego, 0.0};
  const double t0 = traffic.time;
  double brake_min = 0.0;
  std::vector<VehicleControl> controls;
  std::vector<double> accels;

  while (true) {
    const VehicleControl ego_u = ego_policy(state, path, ego.progress, reg, options.limits);
    agent_controls(state, reg, options.prediction, options.limits, controls);
    accels.resize(controls.size());
    for (std::size_t i = 0; i < controls.size(); ++i) {
      accels[i] = controls[i].a;
      brake_min = std::min(brake_min, controls[i].a);
    }
    const auto leader = reg.leader_of(kEgoSlot);
    const double rate = running_cost(state.ego.v, ego_u.a,
                                     leader ? std::optional<double>(leader->gap) : std::nullopt,
                                     accels, cost);
    if (options.record_trace) result.trace.push_back(frame(state, ego_u.a, controls));

    const double remaining = path.length() - ego.progress;
    const double t_cover = time_to_cover(state.ego.v, ego_u.a, remaining);
    const bool last = t_cover <= options.dt;
    const double h = last ? t_cover : options.dt;

    if (h > 0.0) {
      result.stage_cost += rate * h;
      ego = step_along(ego, path, ego_u.a, h);
      for (std::size_t i = 0; i < state.agents.size(); ++i) {
        state.agents[i].state = step(state.agents[i].state, controls[i], h);
      }
      state.time += h;
    }
    if (last) {
      ego.progress = path.length();
      const Pose2 end = path.end_pose();
      ego.vehicle.x = end.x;
      ego.vehicle.y = end.y;
      ego.vehicle.theta = end.theta;
    }
    state.ego = ego.vehicle;
    state.ego_kappa = path.curvature_at(ego.progress);

    reg.register_vehicle(kEgoSlot, state.ego, state.ego_footprint);
    for (std::size_t i = 0; i < state.agents.size(); ++i) {
      reg.try_register(agent_slot(i), state.agents[i].state, state.agents[i].footprint);
    }
    if (reg.overlapping(kEgoSlot) != 0) {
      result.collision = true;
      break;
    }
    if (last) {
      result.reached_endpoint = true;
      break;
    }
    if (state.time - t0 >= options.t_max - 1e-9) break;
  }

  if (options.record_trace) {
    agent_controls(state, reg, options.prediction, options.limits, controls);
    const double a_end = result.collision
                             ? 0.0
                             : ego_policy(state, path, ego.progress, reg, options.limits).a;
    result.trace.push_back(frame(state, a_end, controls));
  }

  result.duration = state.time - t0;
  result.agent_brake_min = brake_min;
  result.end_vertex = result.reached_endpoint ? target : graph.nearest(state.ego.x, state.ego.y);
  result.actual_endpoint = graph.waypoint(result.end_vertex);
  return result;
}

RolloutResult predict_constant_velocity(const TrafficState& traffic, const PlacedPath& path,
                                        VertexIndex target, const LaneGraph& graph,
                                        const CostConfig& cost, RolloutOptions options,
                                        RolloutWorkspace& workspace) {
  options.prediction = Prediction::ConstantVelocity;
  return rollout(traffic, path, target, graph, cost, options, workspace);
}

}  // namespace felp
