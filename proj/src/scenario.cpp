#include "felp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

namespace felp {

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Merging:
      return "merging";
    case ScenarioKind::Highway:
      return "highway";
    case ScenarioKind::Density:
      return "density";
  }
  return "highway";
}

ScenarioKind parse_scenario(const std::string& text) {
  if (text == "merging") return ScenarioKind::Merging;
  if (text == "highway") return ScenarioKind::Highway;
  if (text == "density") return ScenarioKind::Density;
  throw InvalidArgument("unknown scenario '" + text + "' (expected merging|highway|density)");
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "scenario", "duration", "replan_period", "agents", "seed", "spawn_deadlock",
      "road.lanes", "road.lane_width", "road.length", "road.station_step", "road.curve",
      "road.lane_piece", "road.boundary", "road.off_route",
      "graph.r0", "graph.behind", "graph.ahead", "traffic.behind", "traffic.ahead",
      "planner.variant", "planner.prediction", "planner.n0", "planner.dt", "planner.t_max",
      "cost.w_a", "cost.w_h", "cost.t_safe", "cost.w_b", "cost.b_comfort", "cost.w_v",
      "cost.w_d", "cost.v_des", "cost.s_m",
      "limits.kappa_max", "limits.a_min", "limits.a_max",
      "ego.lane", "ego.s", "ego.speed", "ego.v0", "ego.T", "ego.s0", "ego.alpha", "ego.beta",
      "agent.v0", "agent.T", "agent.s0", "agent.alpha", "agent.beta",
      "noise.jitter", "noise.ou_theta", "noise.ou_sigma", "noise.ou_clamp",
      "merge.leader_offset", "merge.leader_v0", "merge.left_ahead", "merge.left_behind",
      "merge.left_speed", "merge.cap", "density.counts"};
  return keys;
}

IdmParams read_idm(const ConfigFile& f, const std::string& prefix, IdmParams p) {
  p.v0 = f.get_double(prefix + ".v0", p.v0);
  p.T = f.get_double(prefix + ".T", p.T);
  p.s0 = f.get_double(prefix + ".s0", p.s0);
  p.alpha = f.get_double(prefix + ".alpha", p.alpha);
  p.beta = f.get_double(prefix + ".beta", p.beta);
  return p;
}

std::vector<std::string> fields(const std::string& value, std::size_t count,
                                const std::string& key) {
  auto out = split_fields(value);
  if (out.size() != count) {
    throw InvalidArgument(key + ": expected " + std::to_string(count) + " fields, got '" +
                          value + "'");
  }
  return out;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_file(const ConfigFile& f) {
  f.reject_unknown(known_keys());
  ScenarioConfig c;
  c.kind = parse_scenario(f.get_string("scenario", to_string(c.kind)));
  c.duration = f.get_double("duration", c.duration);
  c.replan_period = f.get_double("replan_period", c.replan_period);
  c.agent_count = f.get_int("agents", c.agent_count);
  const int seed = f.get_int("seed", static_cast<int>(c.seed));
  require(seed >= 0, "seed must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.spawn_deadlock = f.get_double("spawn_deadlock", c.spawn_deadlock);

  RoadDefinition& r = c.road;
  r.lane_count = f.get_int("road.lanes", r.lane_count);
  r.lane_width = f.get_double("road.lane_width", r.lane_width);
  r.length = f.get_double("road.length", r.length);
  r.station_step = f.get_double("road.station_step", r.station_step);
  for (const auto& v : f.all("road.curve")) {
    const auto x = fields(v, 2, "road.curve");
    r.curves.push_back({parse_double(x[0], "road.curve"), parse_double(x[1], "road.curve")});
  }
  const auto piece = [](const std::string& v, const std::string& key) {
    const auto x = fields(v, 3, key);
    return LanePiece{parse_int(x[0], key), parse_double(x[1], key), parse_double(x[2], key)};
  };
  for (const auto& v : f.all("road.lane_piece")) r.lane_pieces.push_back(piece(v, "road.lane_piece"));
  for (const auto& v : f.all("road.off_route")) r.off_route.push_back(piece(v, "road.off_route"));
  for (const auto& v : f.all("road.boundary")) {
    const auto x = fields(v, 4, "road.boundary");
    r.boundaries.push_back({parse_int(x[0], "road.boundary"), parse_double(x[1], "road.boundary"),
                            parse_double(x[2], "road.boundary"), parse_permission(x[3])});
  }

  c.r0 = f.get_double("graph.r0", c.r0);
  c.graph_behind = f.get_double("graph.behind", c.graph_behind);
  c.graph_ahead = f.get_double("graph.ahead", c.graph_ahead);
  c.traffic_behind = f.get_double("traffic.behind", c.traffic_behind);
  c.traffic_ahead = f.get_double("traffic.ahead", c.traffic_ahead);

  PlannerConfig& p = c.planner;
  p.variant = parse_variant(f.get_string("planner.variant", to_string(p.variant)));
  p.prediction = parse_prediction(f.get_string("planner.prediction", to_string(p.prediction)));
  p.n0 = f.get_int("planner.n0", p.n0);
  p.rollout.dt = f.get_double("planner.dt", p.rollout.dt);
  p.rollout.t_max = f.get_double("planner.t_max", p.rollout.t_max);
  CostConfig& k = p.cost;
  k.w_a = f.get_double("cost.w_a", k.w_a);
  k.w_h = f.get_double("cost.w_h", k.w_h);
  k.t_safe = f.get_double("cost.t_safe", k.t_safe);
  k.w_b = f.get_double("cost.w_b", k.w_b);
  k.b_comfort = f.get_double("cost.b_comfort", k.b_comfort);
  k.w_v = f.get_double("cost.w_v", k.w_v);
  k.w_d = f.get_double("cost.w_d", k.w_d);
  k.v_des = f.get_double("cost.v_des", k.v_des);
  k.s_m = f.get_double("cost.s_m", k.s_m);
  VehicleLimits& lim = p.rollout.limits;
  lim.kappa_max = f.get_double("limits.kappa_max", lim.kappa_max);
  lim.a_min = f.get_double("limits.a_min", lim.a_min);
  lim.a_max = f.get_double("limits.a_max", lim.a_max);
  p.spiral.kappa_max = lim.kappa_max;

  c.ego_lane = f.get_int("ego.lane", c.ego_lane);
  c.ego_s = f.get_double("ego.s", c.ego_s);
  c.ego_speed = f.get_double("ego.speed", c.ego_speed);
  c.ego_idm = read_idm(f, "ego", c.ego_idm);
  c.agent_idm = read_idm(f, "agent", c.agent_idm);

  c.noise.jitter = f.get_double("noise.jitter", c.noise.jitter);
  c.noise.ou_theta = f.get_double("noise.ou_theta", c.noise.ou_theta);
  c.noise.ou_sigma = f.get_double("noise.ou_sigma", c.noise.ou_sigma);
  c.noise.ou_clamp = f.get_double("noise.ou_clamp", c.noise.ou_clamp);

  MergeScene& m = c.merge;
  m.leader_offset = f.get_double("merge.leader_offset", m.leader_offset);
  m.leader_v0 = f.get_double("merge.leader_v0", m.leader_v0);
  m.left_ahead = f.get_double("merge.left_ahead", m.left_ahead);
  m.left_behind = f.get_double("merge.left_behind", m.left_behind);
  m.left_speed = f.get_double("merge.left_speed", m.left_speed);
  m.cap = f.get_double("merge.cap", m.cap);

  if (f.has("density.counts")) {
    c.density_counts.clear();
    for (const auto& x : split_fields(f.get_string("density.counts", "")))
      c.density_counts.push_back(parse_int(x, "density.counts"));
  }
  c.validate();
  return c;
}

void ScenarioConfig::validate() const {
  road.validate();
  require(r0 > 0.0, "graph.r0 must be positive");
  require(graph_behind >= 0.0 && graph_ahead > 0.0, "graph window must be positive");
  require(graph_ahead >= planner.cost.s_m + road.lane_width,
          "graph.ahead must cover the planning horizon");
  require(traffic_behind >= 0.0 && traffic_ahead > 0.0, "traffic window must be positive");
  require(traffic_behind <= graph_behind && traffic_ahead < graph_ahead,
          "the map must cover the traffic window");
  require(duration > 0.0, "duration must be positive");
  const double dt = planner.rollout.dt;
  require(dt > 0.0, "planner.dt must be positive");
  const double ratio = replan_period / dt;
  require(replan_period > 0.0 && std::abs(ratio - std::round(ratio)) < 1e-9,
          "replan_period must be a positive multiple of the time step");
  require(agent_count >= 0, "agents must be >= 0");
  require(agent_count < OccupancyRegistry::kMaxVehicles, "too many agents");
  require(ego_idm.valid() && agent_idm.valid(), "IDM parameters must be positive");
  require(noise.jitter >= 0.0 && noise.jitter < 1.0, "noise.jitter must lie in [0, 1)");
  require(noise.ou_theta >= 0.0 && noise.ou_sigma >= 0.0 && noise.ou_clamp >= 0.0,
          "noise parameters must be non-negative");
  require(ego_lane >= 0 && ego_lane < road.lane_count, "ego.lane outside the road");
  require(ego_speed >= 0.0, "ego.speed must be non-negative");
  require(spawn_deadlock > 0.0, "spawn_deadlock must be positive");
  for (int n : density_counts) require(n >= 0, "density.counts must be >= 0");
  (void)planner.stages(r0);
}

// ---------------------------------------------------------------------------
// Closed loop

namespace {

constexpr double kMinDesiredSpeed = 1.0;
constexpr double kSpawnInset = 5.0;  // m

class Episode {
 public:
  explicit Episode(const ScenarioConfig& config)
      : cfg_(config),
        road_(config.road),
        planner_(config.planner),
        rng_(config.seed),
        dt_(config.planner.rollout.dt),
        limits_(config.planner.rollout.limits) {
    result_.kind = config.kind;
    result_.variant = config.planner.variant;
    result_.prediction = config.planner.prediction;
    result_.seed = config.seed;
  }

  void place_ego() {
    const Waypoint w = road_.require_waypoint(cfg_.ego_lane, cfg_.ego_s);
    traffic_.ego = {w.x, w.y, w.theta, cfg_.ego_speed};
    traffic_.ego_kappa = w.kappa;
    traffic_.ego_params = cfg_.ego_idm;
    home_lane_ = cfg_.ego_lane;
    build_graph(cfg_.ego_s);
    result_.initial_graph = graph_;
    result_.ego_footprint = traffic_.ego_footprint;
  }

  void add_agent(int lane, double s, double v, const IdmParams& params) {
    const Waypoint w = road_.require_waypoint(lane, s);
    Agent a;
    a.id = next_id_++;
    a.lane = lane;
    a.state = {w.x, w.y, w.theta, v};
    a.params = params;
    traffic_.agents.push_back(a);
    nominal_v0_.push_back(params.v0);
    ou_.push_back(0.0);
    result_.agent_footprint = a.footprint;
  }

  IdmParams jittered() {
    std::uniform_real_distribution<double> u(1.0 - cfg_.noise.jitter, 1.0 + cfg_.noise.jitter);
    IdmParams p = cfg_.agent_idm;
    p.v0 *= u(rng_);
    p.T *= u(rng_);
    p.s0 *= u(rng_);
    p.alpha *= u(rng_);
    p.beta *= u(rng_);
    return p;
  }

  /// Initial random placement inside the traffic window.
  void populate(int count) {
    std::uniform_real_distribution<double> offset(-cfg_.traffic_behind, cfg_.traffic_ahead);
    std::uniform_int_distribution<int> lane(0, cfg_.road.lane_count - 1);
    const double s_ego = ego_s();
    for (int attempt = 0; attempt < 200 * std::max(count, 1) &&
                          static_cast<int>(traffic_.agents.size()) < count;
         ++attempt) {
      const IdmParams p = jittered();
      const int l = lane(rng_);
      const double s = s_ego + offset(rng_);
      if (spawn_feasible(l, s, p.v0, p)) add_agent(l, s, p.v0, p);
    }
  }

  RunResult run(double duration, bool stop_on_merge, bool maintain_traffic) {
    const auto replan_steps = static_cast<long>(std::llround(cfg_.replan_period / dt_));
    const auto total_steps = static_cast<long>(std::llround(duration / dt_));
    std::vector<double> plan_ms, rollouts;
    std::size_t collisions = 0;
    bool colliding = false;
    double starved = 0.0;
    std::vector<VehicleControl> controls;

    for (long k = 0; k <= total_steps; ++k) {
      if (k % replan_steps == 0 && k < total_steps) {
        shift_graph();
        replan(plan_ms, rollouts);
      }
      register_all();

      const bool hit = registry_->overlapping(kEgoSlot) != 0;
      if (hit && !colliding) ++collisions;
      colliding = hit;

      const std::vector<int> lanes = registry_->lanes(kEgoSlot);
      if (lanes.size() == 1 && lanes[0] != home_lane_) {
        ++result_.lane_changes;
        if (!result_.first_lane_change) result_.first_lane_change = traffic_.time;
        home_lane_ = lanes[0];
      }

      const VehicleControl ego_u = ego_control();
      agent_controls(controls);
      record(ego_u, controls, lanes);
      if (stop_on_merge && result_.first_lane_change) break;
      if (k == total_steps) break;

      advance_ego(ego_u.a);
      for (std::size_t i = 0; i < traffic_.agents.size(); ++i) {
        traffic_.agents[i].state = step(traffic_.agents[i].state, controls[i], dt_);
      }
      traffic_.time = static_cast<double>(k + 1) * dt_;

      if (maintain_traffic) {
        update_noise();
        despawn();
        if (static_cast<int>(traffic_.agents.size()) < cfg_.agent_count) {
          if (spawn_one()) {
            starved = 0.0;
          } else {
            starved += dt_;
            if (starved >= cfg_.spawn_deadlock - 1e-9) {
              throw SpawnDeadlock("highway: no feasible spawn gap for " +
                                  std::to_string(cfg_.spawn_deadlock) + " s at t = " +
                                  std::to_string(traffic_.time) + " s; " + describe_traffic());
            }
          }
        } else {
          starved = 0.0;
        }
        check_window();
      }
    }

    result_.agent_count = cfg_.agent_count;
    result_.metrics = compute_metrics(result_.samples, plan_ms, collisions);
    if (!rollouts.empty()) {
      double sum = 0.0;
      for (double r : rollouts) sum += r;
      result_.metrics.mean_rollouts = sum / static_cast<double>(rollouts.size());
    }
    return std::move(result_);
  }

  const LaneGraph& graph() const { return graph_; }
  const TrafficState& traffic() const { return traffic_; }
  Planner& planner() { return planner_; }

 private:
  // --- map window -----------------------------------------------------------

  std::int64_t window_start_index(double s_ego) const {
    return static_cast<std::int64_t>(std::floor((s_ego - cfg_.graph_behind) / cfg_.r0 + 1e-9));
  }

  std::int64_t window_steps() const {
    return static_cast<std::int64_t>(
        std::llround((cfg_.graph_behind + cfg_.graph_ahead) / cfg_.r0));
  }

  void build_graph(double s_ego) {
    graph_start_ = std::max<std::int64_t>(0, window_start_index(s_ego));
    const Waypoint p0 =
        road_.require_waypoint(home_lane_, static_cast<double>(graph_start_) * cfg_.r0);
    GraphConfig gc;
    gc.r0 = cfg_.r0;
    gc.w0 = cfg_.road.lane_width;
    gc.rm = static_cast<double>(window_steps()) * cfg_.r0;
    graph_ = LaneGraph::build(road_, p0, gc);
    registry_ = std::make_unique<OccupancyRegistry>(graph_);
  }

  void shift_graph() {
    const std::int64_t target = std::max<std::int64_t>(0, window_start_index(ego_s()));
    const std::int64_t delta = target - graph_start_;
    if (delta <= 0) return;
    if (delta >= window_steps()) {
      build_graph(ego_s());
      return;
    }
    const double meters = static_cast<double>(delta) * cfg_.r0;
    graph_.shorten(meters);
    graph_.extend(road_, meters);
    graph_start_ = target;
    registry_ = std::make_unique<OccupancyRegistry>(graph_);
  }

  double station_of(const VehicleState& s) const {
    return graph_.continuous_s(s.x, s.y, graph_.nearest(s.x, s.y));
  }
  double ego_s() const { return station_of(traffic_.ego); }

  // --- vehicles -------------------------------------------------------------

  void register_all() {
    for (int slot = 0; slot < OccupancyRegistry::kMaxVehicles; ++slot) {
      if (registry_->registered(slot)) registry_->deregister(slot);
    }
    register_traffic(*registry_, traffic_);
  }

  void replan(std::vector<double>& plan_ms, std::vector<double>& rollouts) {
    register_all();
    PlanRecord rec;
    rec.time = traffic_.time;
    rec.agents = static_cast<int>(traffic_.agents.size());
    traffic_.ego_kappa = current_curvature();
    try {
      PlanResult plan = planner_.plan(traffic_, graph_);
      paths_ = std::move(plan.paths);
      rec.total_cost = plan.total_cost;
      for (const auto& m : plan.primitives) rec.maneuvers.push_back(m.maneuver);
      rec.stats = plan.stats;
    } catch (const NoPlanError&) {
      paths_.clear();
      rec.fallback = true;
    }
    path_index_ = 0;
    progress_ = 0.0;
    plan_ms.push_back(rec.stats.wall_ms);
    rollouts.push_back(static_cast<double>(rec.stats.rollouts));
    result_.plans.push_back(std::move(rec));
  }

  bool following_plan() const { return path_index_ < paths_.size(); }

  double current_curvature() const {
    if (following_plan()) return paths_[path_index_].curvature_at(progress_);
    return traffic_.ego_kappa;
  }

  VehicleControl ego_control() {
    const double a = idm_or_brake(traffic_.ego.v, registry_->leader_of(kEgoSlot), *registry_,
                                  traffic_.ego_params, limits_);
    double kappa;
    if (following_plan()) {
      kappa = paths_[path_index_].curvature_at(progress_);
    } else {
      kappa = lane_keep_curvature(traffic_.ego, home_lane_, graph_, limits_);
    }
    return {kappa, a};
  }

  void advance_ego(double a) {
    double h = dt_;
    while (following_plan() && h > 0.0) {
      const PlacedPath& path = paths_[path_index_];
      const double t_cover = time_to_cover(traffic_.ego.v, a, path.length() - progress_);
      if (t_cover > h) {
        const TrackingState next = step_along({traffic_.ego, progress_}, path, a, h);
        traffic_.ego = next.vehicle;
        progress_ = next.progress;
        traffic_.ego_kappa = path.curvature_at(progress_);
        return;
      }
      const TrackingState next = step_along({traffic_.ego, progress_}, path, a, t_cover);
      traffic_.ego = next.vehicle;
      const Pose2 end = path.end_pose();
      traffic_.ego.x = end.x;
      traffic_.ego.y = end.y;
      traffic_.ego.theta = end.theta;
      traffic_.ego_kappa = path.curvature_at(path.length());
      h -= t_cover;
      ++path_index_;
      progress_ = 0.0;
    }
    if (h > 0.0) {
      const double kappa = lane_keep_curvature(traffic_.ego, home_lane_, graph_, limits_);
      traffic_.ego = step(traffic_.ego, {kappa, a}, h);
      traffic_.ego_kappa = kappa;
    }
  }

  void agent_controls(std::vector<VehicleControl>& out) const {
    out.resize(traffic_.agents.size());
    for (std::size_t i = 0; i < traffic_.agents.size(); ++i) {
      const Agent& agent = traffic_.agents[i];
      try {
        out[i] = agent_policy(i, traffic_, *registry_, limits_);
      } catch (const MapError&) {
        out[i] = {0.0, idm_acceleration(agent.state.v, std::nullopt, agent.params, limits_)};
      }
    }
  }

  void record(const VehicleControl& ego_u, const std::vector<VehicleControl>& controls,
              const std::vector<int>& lanes) {
    EgoSample sample;
    sample.time = traffic_.time;
    sample.speed = traffic_.ego.v;
    sample.accel = ego_u.a;
    if (const auto leader = registry_->leader_of(kEgoSlot)) sample.leader_gap = leader->gap;
    if (lanes.size() >= 2) {
      for (int lane : lanes) {
        if (lane == home_lane_) continue;
        const auto follower = registry_->follower_on_lane(kEgoSlot, lane);
        if (follower && follower->vehicle != kEgoSlot) {
          const double a = controls[static_cast<std::size_t>(follower->vehicle - 1)].a;
          sample.follower_accel = sample.follower_accel ? std::min(*sample.follower_accel, a) : a;
        }
      }
    }
    result_.samples.push_back(sample);

    const auto row = [&](int id, const VehicleState& s, double a) {
      result_.trace.push_back({traffic_.time, id, s.x, s.y, s.theta, s.v, a});
    };
    row(0, traffic_.ego, ego_u.a);
    for (std::size_t i = 0; i < traffic_.agents.size(); ++i) {
      row(traffic_.agents[i].id, traffic_.agents[i].state, controls[i].a);
    }
  }

  // --- traffic maintenance --------------------------------------------------

  void update_noise() {
    std::normal_distribution<double> normal(0.0, 1.0);
    const NoiseConfig& n = cfg_.noise;
    for (std::size_t i = 0; i < traffic_.agents.size(); ++i) {
      double& x = ou_[i];
      x += -n.ou_theta * x * dt_ + n.ou_sigma * std::sqrt(dt_) * normal(rng_);
      x = std::clamp(x, -n.ou_clamp, n.ou_clamp);
      traffic_.agents[i].params.v0 = std::max(kMinDesiredSpeed, nominal_v0_[i] + x);
    }
  }

  void despawn() {
    const double s_ego = ego_s();
    std::size_t keep = 0;
    for (std::size_t i = 0; i < traffic_.agents.size(); ++i) {
      const double ds = station_of(traffic_.agents[i].state) - s_ego;
      if (ds < -cfg_.traffic_behind || ds > cfg_.traffic_ahead) continue;
      traffic_.agents[keep] = traffic_.agents[i];
      nominal_v0_[keep] = nominal_v0_[i];
      ou_[keep] = ou_[i];
      ++keep;
    }
    traffic_.agents.resize(keep);
    nominal_v0_.resize(keep);
    ou_.resize(keep);
  }

  bool spawn_feasible(int lane, double s, double v, const IdmParams& params) const {
    if (!road_.lane_exists(lane, s)) return false;
    const auto w = road_.waypoint(lane, s);
    if (!w || !road_.on_route(*w)) return false;
    const VehicleFootprint fp;
    // Ego: compare on every lane it touches.
    const auto clear = [&](double s_other, double len_other, double v_other,
                           const IdmParams& p_other) {
      const double ds = s_other - s;
      const double gap = std::abs(ds) - 0.5 * (fp.length + len_other);
      const double needed = ds > 0.0 ? equilibrium_gap(v, params) : equilibrium_gap(v_other, p_other);
      return gap >= needed;
    };
    const std::vector<int> ego_lanes = registry_->registered(kEgoSlot)
                                           ? registry_->lanes(kEgoSlot)
                                           : std::vector<int>{home_lane_};
    const bool ego_here =
        lane == home_lane_ || std::find(ego_lanes.begin(), ego_lanes.end(), lane) != ego_lanes.end();
    if (ego_here && !clear(ego_s(), traffic_.ego_footprint.length, traffic_.ego.v,
                           traffic_.ego_params)) {
      return false;
    }
    for (const Agent& a : traffic_.agents) {
      if (a.lane != lane) continue;
      if (!clear(station_of(a.state), a.footprint.length, a.state.v, a.params)) return false;
    }
    return true;
  }

  bool spawn_one() {
    const IdmParams p = jittered();
    const double v = p.v0;
    const double s_ego = ego_s();
    // Faster agents enter from behind, slower ones from ahead.
    const bool back_first = v > traffic_.ego.v;
    std::vector<int> lanes(static_cast<std::size_t>(cfg_.road.lane_count));
    for (int i = 0; i < cfg_.road.lane_count; ++i) lanes[static_cast<std::size_t>(i)] = i;
    std::shuffle(lanes.begin(), lanes.end(), rng_);
    for (int pass = 0; pass < 2; ++pass) {
      const bool back = (pass == 0) == back_first;
      // Closest feasible spot to the edge; the inset keeps a fresh agent from
      // leaving the window on the next step.
      const double half = 0.5 * (cfg_.traffic_behind + cfg_.traffic_ahead);
      for (double inward = kSpawnInset; inward <= half; inward += kSpawnInset) {
        const double s = back ? s_ego - cfg_.traffic_behind + inward
                              : s_ego + cfg_.traffic_ahead - inward;
        for (int lane : lanes) {
          if (spawn_feasible(lane, s, v, p)) {
            add_agent(lane, s, v, p);
            return true;
          }
        }
      }
    }
    return false;
  }

  std::string describe_traffic() const {
    std::ostringstream out;
    out.precision(3);
    out << "ego lane " << home_lane_ << " v " << traffic_.ego.v << "; agents (lane, ds, v):";
    const double s_ego = ego_s();
    for (const Agent& a : traffic_.agents) {
      out << " (" << a.lane << ", " << station_of(a.state) - s_ego << ", " << a.state.v << ")";
    }
    return out.str();
  }

  void check_window() {
    const double s_ego = ego_s();
    for (const Agent& a : traffic_.agents) {
      const double ds = station_of(a.state) - s_ego;
      if (ds < -cfg_.traffic_behind - 1e-6 || ds > cfg_.traffic_ahead + 1e-6) {
        ++result_.max_window_violations;
      }
    }
  }

  const ScenarioConfig& cfg_;
  SyntheticRoad road_;
  Planner planner_;
  std::mt19937_64 rng_;
  double dt_;
  VehicleLimits limits_;

  LaneGraph graph_;
  std::int64_t graph_start_ = 0;
  std::unique_ptr<OccupancyRegistry> registry_;
  TrafficState traffic_;
  std::vector<double> nominal_v0_;
  std::vector<double> ou_;
  int next_id_ = 1;
  int home_lane_ = 0;

  std::vector<PlacedPath> paths_;
  std::size_t path_index_ = 0;
  double progress_ = 0.0;

  RunResult result_;
};

ScenarioConfig highway_config(const ScenarioConfig& config) {
  ScenarioConfig c = config;
  const double travel = (std::max(c.ego_idm.v0, c.agent_idm.v0) * 1.5 + 10.0) * c.duration;
  c.road.length = std::max(c.road.length, c.ego_s + travel + c.graph_ahead + 500.0);
  return c;
}

void setup_merging(const ScenarioConfig& c, Episode& e) {
  if (c.road.lane_count < 2) throw InvalidArgument("merging: road needs at least two lanes");
  if (c.ego_lane != 0) throw InvalidArgument("merging: the ego starts on lane 0");
  e.place_ego();
  const MergeScene& m = c.merge;
  IdmParams leader = c.agent_idm;
  leader.v0 = m.leader_v0;
  IdmParams left = c.agent_idm;
  left.v0 = m.left_speed;
  e.add_agent(0, c.ego_s + m.leader_offset, c.ego_speed, leader);
  e.add_agent(1, c.ego_s + m.left_ahead, m.left_speed, left);
  e.add_agent(1, c.ego_s - m.left_behind, m.left_speed, left);
}

}  // namespace

RunResult run_merging(const ScenarioConfig& config) {
  if (config.kind != ScenarioKind::Merging) {
    throw InvalidArgument("run_merging: config describes a " + std::string(to_string(config.kind)) +
                          " scenario");
  }
  config.validate();
  Episode episode(config);
  setup_merging(config, episode);
  RunResult r = episode.run(config.merge.cap, true, false);
  r.agent_count = 3;
  return r;
}

RunResult run_highway(const ScenarioConfig& config) {
  if (config.kind == ScenarioKind::Merging) {
    throw InvalidArgument("run_highway: config describes a merging scenario");
  }
  config.validate();
  const ScenarioConfig c = highway_config(config);
  Episode episode(c);
  episode.place_ego();
  episode.populate(c.agent_count);
  return episode.run(c.duration, false, true);
}

std::vector<RunResult> run_density_sweep(const ScenarioConfig& config) {
  std::vector<RunResult> out;
  for (int count : config.density_counts) {
    ScenarioConfig c = config;
    c.kind = ScenarioKind::Highway;
    c.agent_count = count;
    out.push_back(run_highway(c));
  }
  return out;
}

PlanResult plan_once(const ScenarioConfig& config, LaneGraph* graph_out) {
  config.validate();
  const ScenarioConfig c =
      config.kind == ScenarioKind::Merging ? config : highway_config(config);
  Episode episode(c);
  if (c.kind == ScenarioKind::Merging) {
    setup_merging(c, episode);
  } else {
    episode.place_ego();
    episode.populate(c.agent_count);
  }
  PlanResult plan = episode.planner().plan(episode.traffic(), episode.graph());
  if (graph_out) *graph_out = episode.graph();
  return plan;
}

double linear_fit_r2(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "linear fit: need two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  require(sxx > 0.0, "linear fit: x values are all equal");
  if (syy == 0.0) return 1.0;
  return sxy * sxy / (sxx * syy);
}

}  // namespace felp
