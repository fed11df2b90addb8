#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "felp/spiral.hpp"

namespace felp::oracle {

double reference_idm(double v, double gap, double dv, const IdmParams& p) {
  const double star = p.s0 + std::max(0.0, v * p.T + v * dv / (2.0 * std::sqrt(p.alpha * p.beta)));
  return p.alpha * (1.0 - std::pow(v / p.v0, 4.0) - std::pow(star / gap, 2.0));
}

Pose2 integrate_spiral(const SpiralPath& path, int steps) {
  const double h = path.length / steps;
  double x = 0.0, y = 0.0;
  double prev_c = 1.0, prev_s = 0.0;
  for (int i = 1; i <= steps; ++i) {
    const double t = path.heading(h * i);
    const double c = std::cos(t), s = std::sin(t);
    x += 0.5 * h * (prev_c + c);
    y += 0.5 * h * (prev_s + s);
    prev_c = c;
    prev_s = s;
  }
  return {x, y, path.heading(path.length)};
}

TableRoad::TableRoad(int stations, int lanes, double r0, double w0)
    : stations_(stations), lanes_(lanes), r0_(r0), w0_(w0) {
  const auto n = static_cast<std::size_t>(stations * lanes);
  exists_.assign(n, true);
  front_.assign(n, true);
  left_.assign(n, true);
  right_.assign(n, true);
}

std::size_t TableRoad::cell(int station, int lane) const {
  return static_cast<std::size_t>(station * lanes_ + lane);
}

void TableRoad::set_exists(int st, int ln, bool v) { exists_[cell(st, ln)] = v; }
void TableRoad::set_front(int st, int ln, bool v) { front_[cell(st, ln)] = v; }
void TableRoad::set_left(int st, int ln, bool v) { left_[cell(st, ln)] = v; }
void TableRoad::set_right(int st, int ln, bool v) { right_[cell(st, ln)] = v; }

bool TableRoad::exists(int st, int ln) const {
  return st >= 0 && st < stations_ && ln >= 0 && ln < lanes_ && exists_[cell(st, ln)];
}
bool TableRoad::front(int st, int ln) const {
  return exists(st, ln) && exists(st + 1, ln) && front_[cell(st, ln)];
}
bool TableRoad::left(int st, int ln) const {
  return exists(st, ln) && exists(st, ln + 1) && left_[cell(st, ln)];
}
bool TableRoad::right(int st, int ln) const {
  return exists(st, ln) && exists(st, ln - 1) && right_[cell(st, ln)];
}

Waypoint TableRoad::at(int station, int lane) const {
  Waypoint w;
  w.s = station * r0_;
  w.l = lane * w0_;
  w.x = w.s;
  w.y = w.l;
  w.lane = lane;
  return w;
}

int TableRoad::station_of(const Waypoint& p) const {
  return static_cast<int>(std::lround(p.s / r0_));
}

std::vector<Waypoint> TableRoad::front_waypoints(const Waypoint& p, double distance) const {
  const int st = station_of(p);
  if (std::abs(distance - r0_) > 1e-12 || !front(st, p.lane)) return {};
  return {at(st + 1, p.lane)};
}

std::optional<Waypoint> TableRoad::left_waypoint(const Waypoint& p) const {
  const int st = station_of(p);
  if (!left(st, p.lane)) return std::nullopt;
  return at(st, p.lane + 1);
}

std::optional<Waypoint> TableRoad::right_waypoint(const Waypoint& p) const {
  const int st = station_of(p);
  if (!right(st, p.lane)) return std::nullopt;
  return at(st, p.lane - 1);
}

bool TableRoad::on_route(const Waypoint& p) const { return exists(station_of(p), p.lane); }

TableRoad random_table_road(std::mt19937_64& rng, int max_vertices) {
  std::uniform_int_distribution<int> lanes_d(1, 4);
  const int lanes = lanes_d(rng);
  std::uniform_int_distribution<int> stations_d(3, std::max(3, max_vertices / lanes));
  const int stations = stations_d(rng);
  const double widths[] = {1.0, 2.0, 3.7};
  std::uniform_int_distribution<int> width_d(0, 2);
  TableRoad road(stations, lanes, 1.0, widths[width_d(rng)]);
  std::bernoulli_distribution keep(0.9), front(0.95), lateral(0.6);
  for (int st = 0; st < stations; ++st) {
    for (int ln = 0; ln < lanes; ++ln) {
      road.set_exists(st, ln, keep(rng));
      road.set_front(st, ln, front(rng));
      road.set_left(st, ln, lateral(rng));
      road.set_right(st, ln, lateral(rng));
    }
  }
  road.set_exists(0, 0, true);
  return road;
}

namespace {

struct Arc {
  int to;
  double length;
};

// Shortest length to `target` from every node by repeated relaxation.
std::vector<double> distances_to(const std::vector<std::vector<Arc>>& adj, int target) {
  std::vector<double> dist(adj.size(), INFINITY);
  dist[static_cast<std::size_t>(target)] = 0.0;
  for (std::size_t round = 0; round < adj.size(); ++round) {
    bool changed = false;
    for (std::size_t u = 0; u < adj.size(); ++u) {
      for (const Arc& a : adj[u]) {
        const double via = a.length + dist[static_cast<std::size_t>(a.to)];
        if (via < dist[u] - 1e-12) {
          dist[u] = via;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return dist;
}

// Every simple path from `from` whose length stays within `limit` of the
// remaining distance; returns the shortest length to `to` and its count.
PathStats enumerate(const std::vector<std::vector<Arc>>& adj, int from, int to,
                    const std::vector<double>& remaining, double limit) {
  PathStats best;
  std::vector<bool> on_path(adj.size(), false);
  std::function<void(int, double)> dfs = [&](int u, double len) {
    if (len + remaining[static_cast<std::size_t>(u)] > limit + 1e-9) return;
    if (u == to) {
      if (len < best.length - 1e-9) {
        best.length = len;
        best.count = 1;
      } else if (std::abs(len - best.length) <= 1e-9) {
        ++best.count;
      }
      return;
    }
    on_path[static_cast<std::size_t>(u)] = true;
    for (const Arc& a : adj[static_cast<std::size_t>(u)]) {
      if (!on_path[static_cast<std::size_t>(a.to)]) dfs(a.to, len + a.length);
    }
    on_path[static_cast<std::size_t>(u)] = false;
  };
  dfs(from, 0.0);
  return best;
}

}  // namespace

PathStats enumerate_table_paths(const TableRoad& road, int from_station, int from_lane,
                                int to_station, int to_lane, double r0, double w0) {
  const int lanes = road.lanes();
  const auto id = [&](int st, int ln) { return st * lanes + ln; };
  std::vector<std::vector<Arc>> adj(static_cast<std::size_t>(road.stations() * lanes));
  for (int st = 0; st < road.stations(); ++st) {
    for (int ln = 0; ln < lanes; ++ln) {
      auto& out = adj[static_cast<std::size_t>(id(st, ln))];
      if (road.front(st, ln)) out.push_back({id(st + 1, ln), r0});
      if (road.left(st, ln)) out.push_back({id(st, ln + 1), w0});
      if (road.right(st, ln)) out.push_back({id(st, ln - 1), w0});
    }
  }
  const int target = id(to_station, to_lane);
  const auto remaining = distances_to(adj, target);
  const double d = remaining[static_cast<std::size_t>(id(from_station, from_lane))];
  if (!std::isfinite(d)) return {};
  return enumerate(adj, id(from_station, from_lane), target, remaining, d);
}

PathStats enumerate_bounded_paths(const LaneGraph& graph, VertexIndex from, VertexIndex to,
                                  double bound) {
  const GraphConfig& c = graph.config();
  std::vector<std::vector<Arc>> adj(graph.size());
  for (const Edge& e : graph.edges()) {
    adj[static_cast<std::size_t>(e.from)].push_back(
        {e.to, e.kind == EdgeKind::Front ? c.r0 : c.w0});
  }
  const std::vector<double> zero(graph.size(), 0.0);
  PathStats best;
  std::vector<bool> on_path(graph.size(), false);
  std::function<void(int, double)> dfs = [&](int u, double len) {
    if (len > bound + 1e-9) return;
    if (u == to) {
      if (len < best.length - 1e-9) {
        best.length = len;
        best.count = 1;
      } else if (std::abs(len - best.length) <= 1e-9) {
        ++best.count;
      }
      return;
    }
    on_path[static_cast<std::size_t>(u)] = true;
    for (const Arc& a : adj[static_cast<std::size_t>(u)]) {
      if (!on_path[static_cast<std::size_t>(a.to)]) dfs(a.to, len + a.length);
    }
    on_path[static_cast<std::size_t>(u)] = false;
  };
  dfs(from, 0.0);
  return best;
}

VertexIndex brute_nearest(const LaneGraph& graph, double x, double y) {
  VertexIndex best = kNoVertex;
  double best_d2 = INFINITY;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const auto v = static_cast<VertexIndex>(i);
    const Waypoint& w = graph.waypoint(v);
    const double d2 = (w.x - x) * (w.x - x) + (w.y - y) * (w.y - y);
    if (d2 < best_d2 || (d2 == best_d2 && graph.id(v) < graph.id(best))) {
      best_d2 = d2;
      best = v;
    }
  }
  return best;
}

double brute_force_plan_cost(const TrafficState& traffic, const LaneGraph& graph,
                             const PlannerConfig& config) {
  const int n = config.stages(graph.config().r0);
  const GraphConfig& g = graph.config();
  const VertexIndex root = brute_nearest(graph, traffic.ego.x, traffic.ego.y);
  const double root_s = graph.waypoint(root).s;
  RolloutOptions opts = config.rollout;
  opts.prediction = config.prediction;
  opts.record_trace = false;
  RolloutWorkspace workspace(graph);

  const auto legal = [&](VertexIndex a, VertexIndex b) {
    const double bound = g.r0 * config.n0 + g.w0;
    const PathStats p = enumerate_bounded_paths(graph, a, b, bound);
    const auto lanes =
        static_cast<std::uint64_t>(std::llround(std::abs(graph.waypoint(b).l - graph.waypoint(a).l) / g.w0));
    return p.count == lanes * static_cast<std::uint64_t>(config.n0) + 1 && p.length <= bound + 1e-9;
  };

  double best = INFINITY;
  const auto terminal = [&](const TrafficState& t, VertexIndex v, double cost) {
    best = std::min(best, cost + terminal_cost(t.ego.v, graph.waypoint(v).s - root_s, config.cost));
  };
  std::function<void(const TrafficState&, VertexIndex, double, int)> dfs =
      [&](const TrafficState& t, VertexIndex v, double cost, int stage) {
        bool any = false;
        for (const EndpointOption& o : conformal_endpoints(graph, v, t.ego.pose(), config.n0)) {
          if (!legal(v, o.vertex)) continue;
          any = true;
          SpiralPath spiral;
          try {
            spiral = solve_bvp(o.local, t.ego_kappa, config.spiral);
          } catch (const Error&) {
            continue;
          }
          const PlacedPath path(t.ego.pose(), spiral);
          const RolloutResult r = rollout(t, path, o.vertex, graph, config.cost, opts, workspace);
          if (r.collision) continue;
          const double c = cost + r.stage_cost;
          if (r.reached_endpoint && stage + 1 < n) {
            dfs(r.end_state, r.end_vertex, c, stage + 1);
          } else {
            terminal(r.end_state, r.end_vertex, c);
          }
        }
        if (!any) terminal(t, v, cost);
      };
  dfs(traffic, root, 0.0, 0);
  return best;
}

RoadDefinition straight_road(int lanes, double length, double width) {
  RoadDefinition d;
  d.lane_count = lanes;
  d.length = length;
  d.lane_width = width;
  return d;
}

TrafficState ego_only(const SyntheticRoad& road, int lane, double s, double v) {
  const Waypoint w = road.require_waypoint(lane, s);
  TrafficState t;
  t.ego = {w.x, w.y, w.theta, v};
  t.ego_kappa = w.kappa;
  return t;
}

Agent make_agent(const SyntheticRoad& road, int id, int lane, double s, double v,
                 IdmParams params) {
  const Waypoint w = road.require_waypoint(lane, s);
  Agent a;
  a.id = id;
  a.lane = lane;
  a.state = {w.x, w.y, w.theta, v};
  a.params = params;
  return a;
}

PlanningScene random_planning_scene(std::mt19937_64& rng, int lanes, int max_agents,
                                    double horizon) {
  RoadDefinition def = straight_road(lanes, 1000.0);
  std::bernoulli_distribution curved(0.5);
  std::uniform_real_distribution<double> kappa(-0.003, 0.003);
  if (curved(rng)) def.curves = {{0.0, kappa(rng)}};
  SyntheticRoad road(def);

  const double ego_s = 100.0;
  std::uniform_int_distribution<int> lane_d(0, lanes - 1);
  std::uniform_real_distribution<double> speed(8.0, 22.0);
  const int ego_lane = lane_d(rng);
  TrafficState traffic = ego_only(road, ego_lane, ego_s, speed(rng));

  std::uniform_int_distribution<int> count_d(0, max_agents);
  std::uniform_real_distribution<double> offset(-30.0, 80.0);
  const int count = count_d(rng);
  std::vector<std::pair<int, double>> placed{{ego_lane, ego_s}};
  for (int tries = 0; static_cast<int>(traffic.agents.size()) < count && tries < 200; ++tries) {
    const int lane = lane_d(rng);
    const double s = std::round(ego_s + offset(rng));
    const bool clear = std::all_of(placed.begin(), placed.end(), [&](const auto& p) {
      return p.first != lane || std::abs(p.second - s) >= 8.0;
    });
    if (!clear) continue;
    placed.emplace_back(lane, s);
    traffic.agents.push_back(
        make_agent(road, static_cast<int>(traffic.agents.size()) + 1, lane, s, speed(rng)));
  }

  const Waypoint start = road.require_waypoint(0, ego_s - 40.0);
  LaneGraph graph = LaneGraph::build(road, start, {1.0, 80.0 + horizon, def.lane_width});
  return {std::move(road), std::move(graph), std::move(traffic)};
}

}  // namespace felp::oracle
