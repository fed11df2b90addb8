#include "felp/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

namespace felp {

const char* to_string(Variant variant) {
  switch (variant) {
    case Variant::Felp:
      return "felp";
    case Variant::CFelp:
      return "cfelp";
    case Variant::RFelp:
      return "rfelp";
  }
  return "felp";
}

Variant parse_variant(const std::string& text) {
  if (text == "felp") return Variant::Felp;
  if (text == "cfelp") return Variant::CFelp;
  if (text == "rfelp") return Variant::RFelp;
  throw InvalidArgument("unknown planner variant '" + text + "' (expected felp|cfelp|rfelp)");
}

const char* to_string(Prediction prediction) {
  return prediction == Prediction::Idm ? "idm" : "cv";
}

Prediction parse_prediction(const std::string& text) {
  if (text == "idm") return Prediction::Idm;
  if (text == "cv") return Prediction::ConstantVelocity;
  throw InvalidArgument("unknown prediction mode '" + text + "' (expected idm|cv)");
}

int PlannerConfig::stages(double r0) const {
  require(n0 >= 1 && r0 > 0.0, "planner: n0 and r0 must be positive");
  const double ratio = cost.s_m / (n0 * r0);
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9) {
    throw InvalidArgument("planner: s_m must be a positive multiple of n0 * r0");
  }
  return static_cast<int>(rounded);
}

bool satisfy_constraints(const LaneGraph& graph, VertexIndex prev, VertexIndex next, int n0,
                         bool lane_band, VertexIndex root) {
  const GraphConfig& g = graph.config();
  const double dl = std::abs(graph.waypoint(next).l - graph.waypoint(prev).l);
  const auto lanes = static_cast<std::uint64_t>(std::llround(dl / g.w0));
  const double bound = g.r0 * n0 + g.w0;
  const PathSummary paths = graph.shortest_paths(prev, next, bound);
  if (paths.count != lanes * static_cast<std::uint64_t>(n0) + 1) return false;
  if (paths.length > bound + 1e-9) return false;
  if (lane_band && std::abs(graph.waypoint(next).l - graph.waypoint(root).l) > g.w0 + 1e-9) {
    return false;
  }
  return true;
}

Pose2 expansion_origin(const Snapshot& snapshot) { return snapshot.traffic.ego.pose(); }

Planner::Planner(PlannerConfig config) : config_(std::move(config)), cache_(config_.spiral) {}

PlanResult Planner::plan(const TrafficState& traffic, const LaneGraph& graph) {
  const auto started = std::chrono::steady_clock::now();
  const int n = config_.stages(graph.config().r0);
  PlannerStats stats;

  snapshots_.clear();
  const VertexIndex root_vertex = graph.nearest(traffic.ego.x, traffic.ego.y);
  Snapshot root;
  root.traffic = traffic;
  root.vertex = root_vertex;
  snapshots_.push_back(std::move(root));

  RolloutOptions ropts = config_.rollout;
  ropts.prediction = config_.prediction;
  ropts.record_trace = false;
  RolloutWorkspace workspace(graph);

  const bool pruned = config_.variant == Variant::RFelp;
  std::deque<int> fifo;
  using Ranked = std::pair<double, int>;
  std::priority_queue<Ranked, std::vector<Ranked>, std::greater<>> ranked;
  std::vector<int> live(graph.size(), -1);
  const auto enqueue = [&](int index) {
    if (pruned) {
      ranked.emplace(snapshots_[static_cast<std::size_t>(index)].cost_to_come, index);
    } else {
      fifo.push_back(index);
    }
  };
  const auto empty = [&] { return pruned ? ranked.empty() : fifo.empty(); };
  const auto pop = [&] {
    int index;
    if (pruned) {
      index = ranked.top().second;
      ranked.pop();
    } else {
      index = fifo.front();
      fifo.pop_front();
    }
    return index;
  };

  enqueue(0);
  while (!empty()) {
    const int index = pop();
    Snapshot& parent = snapshots_[static_cast<std::size_t>(index)];
    if (!parent.alive) continue;

    const Pose2 origin = expansion_origin(parent);
    const double kappa0 = parent.traffic.ego_kappa;
    bool any_option = false;
    for (const EndpointOption& option :
         conformal_endpoints(graph, parent.vertex, origin, config_.n0)) {
      if (!satisfy_constraints(graph, parent.vertex, option.vertex, config_.n0, false,
                               root_vertex)) {
        ++stats.constraint_rejections;
        continue;
      }
      any_option = true;
      const bool change = option.maneuver != Maneuver::Keep;
      if (config_.variant == Variant::CFelp) {
        const bool in_band = satisfy_constraints(graph, parent.vertex, option.vertex,
                                                 config_.n0, true, root_vertex);
        if (!in_band || (change && parent.lane_changes >= 1)) {
          ++stats.constraint_rejections;
          continue;
        }
      }

      const SpiralPath* spiral = nullptr;
      try {
        spiral = &cache_.solve(option.local, kappa0);
      } catch (const InfeasibleBoundary&) {
        ++stats.bvp_failures;
        continue;
      }
      const PlacedPath path(origin, *spiral);
      RolloutResult result =
          rollout(parent.traffic, path, option.vertex, graph, config_.cost, ropts, workspace);
      ++stats.rollouts;
      if (result.collision) {
        ++stats.collisions_pruned;
        continue;
      }

      Snapshot child;
      child.traffic = std::move(result.end_state);
      child.vertex = result.end_vertex;
      child.cost_to_come = parent.cost_to_come + result.stage_cost;
      child.parent = index;
      child.stage = parent.stage + 1;
      child.lane_changes = parent.lane_changes + (change ? 1 : 0);
      child.reached = result.reached_endpoint;
      child.primitive = option;
      child.path = path;

      const bool expandable = child.reached && child.stage < n;
      if (pruned && child.reached) {
        int& holder = live[static_cast<std::size_t>(child.vertex)];
        if (holder >= 0) {
          Snapshot& existing = snapshots_[static_cast<std::size_t>(holder)];
          if (child.cost_to_come >= existing.cost_to_come) continue;
          existing.alive = false;
        }
        snapshots_.push_back(std::move(child));
        holder = static_cast<int>(snapshots_.size()) - 1;
      } else {
        snapshots_.push_back(std::move(child));
      }
      if (expandable) enqueue(static_cast<int>(snapshots_.size()) - 1);
    }
    if (!any_option) snapshots_[static_cast<std::size_t>(index)].dead_end = true;
  }

  // Terminal set and its best member.
  const double root_s = graph.waypoint(root_vertex).s;
  int best = -1;
  double best_total = INFINITY, best_terminal = 0.0, best_travelled = 0.0;
  for (std::size_t i = 0; i < snapshots_.size(); ++i) {
    const Snapshot& sn = snapshots_[i];
    if (!sn.alive) continue;
    const bool terminal = (sn.reached && sn.stage == n) || !sn.reached || sn.dead_end;
    if (!terminal) continue;
    ++stats.terminals;
    const double travelled = graph.waypoint(sn.vertex).s - root_s;
    const double tc = terminal_cost(sn.traffic.ego.v, travelled, config_.cost);
    const double total = sn.cost_to_come + tc;
    bool better = best < 0 || total < best_total;
    if (!better && total == best_total) {
      const Snapshot& cur = snapshots_[static_cast<std::size_t>(best)];
      if (travelled != best_travelled) {
        better = travelled > best_travelled;
      } else if (sn.lane_changes != cur.lane_changes) {
        better = sn.lane_changes < cur.lane_changes;
      } else if (graph.id(sn.vertex) != graph.id(cur.vertex)) {
        better = graph.id(sn.vertex) < graph.id(cur.vertex);
      }
    }
    if (better) {
      best = static_cast<int>(i);
      best_total = total;
      best_terminal = tc;
      best_travelled = travelled;
    }
  }
  stats.snapshots = snapshots_.size();
  if (best < 0) throw NoPlanError("plan: every option from the current state collides");

  PlanResult result = backtrace(best, graph, best_terminal);
  stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  result.stats = stats;
  return result;
}

PlanResult Planner::backtrace(int terminal, const LaneGraph& graph, double terminal_cost_value) {
  PlanResult result;
  result.variant = config_.variant;
  std::vector<int> chain;
  for (int i = terminal; i >= 0; i = snapshots_[static_cast<std::size_t>(i)].parent) {
    if (!chain.empty() && i >= chain.back()) {
      throw InvariantViolation("backtrace: parent chain is not ordered");
    }
    chain.push_back(i);
  }
  if (chain.back() != 0) throw InvariantViolation("backtrace: chain does not end at the root");
  std::reverse(chain.begin(), chain.end());

  const Snapshot& end = snapshots_[static_cast<std::size_t>(terminal)];
  result.cost_to_come = end.cost_to_come;
  result.terminal_cost = terminal_cost_value;
  result.total_cost = end.cost_to_come + terminal_cost_value;
  for (int i : chain) {
    const Snapshot& sn = snapshots_[static_cast<std::size_t>(i)];
    result.waypoints.push_back(sn.vertex);
    if (sn.primitive) {
      result.primitives.push_back(*sn.primitive);
      result.paths.push_back(sn.path);
    }
  }

  if (config_.record_expected_trace && !result.paths.empty()) {
    RolloutOptions ropts = config_.rollout;
    ropts.prediction = config_.prediction;
    ropts.record_trace = true;
    RolloutWorkspace workspace(graph);
    TrafficState state = snapshots_[0].traffic;
    for (std::size_t k = 0; k < result.paths.size(); ++k) {
      RolloutResult r = rollout(state, result.paths[k], result.primitives[k].vertex, graph,
                                config_.cost, ropts, workspace);
      state = r.end_state;
      result.expected.push_back(std::move(r));
    }
  }
  return result;
}

}  // namespace felp
