#include "felp/lane_graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>

namespace felp {

namespace {

constexpr std::int64_t kStationBias = std::int64_t{1} << 39;
constexpr int kLaneBits = 12;
constexpr double kPoseTolerance = 1e-6;
constexpr double kLengthEps = 1e-9;

bool same_pose(const Waypoint& a, const Waypoint& b) {
  return std::abs(a.x - b.x) <= kPoseTolerance && std::abs(a.y - b.y) <= kPoseTolerance &&
         std::abs(wrap_angle(a.theta - b.theta)) <= kPoseTolerance;
}

std::int64_t whole_steps(double distance, double r0, const char* what) {
  const double ratio = distance / r0;
  const double rounded = std::round(ratio);
  if (!(distance > 0.0) || std::abs(ratio - rounded) > 1e-9 || rounded < 1.0) {
    throw InvalidArgument(std::string(what) + ": delta must be a positive multiple of r0");
  }
  return static_cast<std::int64_t>(rounded);
}

}  // namespace

VertexId make_vertex_id(std::int64_t station_index, int lane) {
  if (lane < 0 || lane >= (1 << kLaneBits)) throw InvalidArgument("vertex id: lane out of range");
  const std::int64_t biased = station_index + kStationBias;
  if (biased < 0 || biased >= (std::int64_t{1} << 51)) {
    throw InvalidArgument("vertex id: station index out of range");
  }
  return (static_cast<VertexId>(biased) << kLaneBits) | static_cast<VertexId>(lane);
}

std::int64_t station_index_of(VertexId id) {
  return static_cast<std::int64_t>(id >> kLaneBits) - kStationBias;
}

int lane_of(VertexId id) { return static_cast<int>(id & ((VertexId{1} << kLaneBits) - 1)); }

// ---------------------------------------------------------------------------
// Construction

std::int64_t LaneGraph::station_index(double s) const {
  return static_cast<std::int64_t>(std::llround(s / config_.r0));
}

std::int64_t LaneGraph::max_steps() const {
  return static_cast<std::int64_t>(std::floor(config_.rm / config_.r0 + 1e-9));
}

LaneGraph LaneGraph::build(const RoadProvider& road, const Waypoint& p0,
                           const GraphConfig& config) {
  require(config.r0 > 0.0 && config.r0 <= config.rm, "build: need 0 < r0 <= rm");
  require(config.w0 > 0.0, "build: w0 must be positive");
  if (!road.on_route(p0)) throw MapError("build: starting waypoint is not on the route");

  LaneGraph graph;
  graph.config_ = config;
  const VertexId root = make_vertex_id(graph.station_index(p0.s), p0.lane);
  graph.nodes_.emplace(root, Node{p0, 0, {}, {}, {}});
  graph.grow(road, {root});
  graph.finalize();
  return graph;
}

void LaneGraph::grow(const RoadProvider& road, std::vector<VertexId> seed) {
  std::deque<VertexId> queue(seed.begin(), seed.end());
  const std::int64_t limit = max_steps();

  // Adds `w` as a neighbor of `node` (creating it when allowed) and returns
  // its id when it ends up in the graph.
  const auto admit = [&](const Node& node, const Waypoint& w, std::int64_t expected_station,
                         std::int64_t range_steps) -> std::optional<VertexId> {
    if (station_index(w.s) != expected_station) {
      throw MapError("build: road returned a waypoint off the station grid");
    }
    const VertexId id = make_vertex_id(expected_station, w.lane);
    auto it = nodes_.find(id);
    if (it != nodes_.end()) {
      if (!same_pose(it->second.waypoint, w)) {
        throw MapError("build: road returned the same waypoint at two different poses");
      }
      return id;
    }
    if (range_steps > limit) return std::nullopt;
    nodes_.emplace(id, Node{w, range_steps, {}, {}, {}});
    queue.push_back(id);
    (void)node;
    return id;
  };

  while (!queue.empty()) {
    const VertexId id = queue.front();
    queue.pop_front();
    Node& node = nodes_.at(id);
    const std::int64_t station = station_index_of(id);

    std::optional<Waypoint> forward;
    for (const Waypoint& w : road.front_waypoints(node.waypoint, config_.r0)) {
      if (road.on_route(w)) {
        forward = w;
        break;
      }
    }
    if (forward) node.front = admit(node, *forward, station + 1, node.range_steps + 1);

    // Lateral neighbours inherit the range of their source vertex.
    if (auto w = road.left_waypoint(node.waypoint); w && road.on_route(*w)) {
      if (w->lane != node.waypoint.lane + 1) throw MapError("build: left waypoint on wrong lane");
      node.left = admit(node, *w, station, node.range_steps);
    }
    if (auto w = road.right_waypoint(node.waypoint); w && road.on_route(*w)) {
      if (w->lane != node.waypoint.lane - 1) throw MapError("build: right waypoint on wrong lane");
      node.right = admit(node, *w, station, node.range_steps);
    }
  }
}

void LaneGraph::extend(const RoadProvider& road, double delta) {
  const std::int64_t steps = whole_steps(delta, config_.r0, "extend");
  config_.rm = static_cast<double>(max_steps() + steps) * config_.r0;
  std::vector<VertexId> seed;
  seed.reserve(exit_.size());
  for (VertexIndex v : exit_) seed.push_back(id(v));
  grow(road, std::move(seed));
  finalize();
}

void LaneGraph::shorten(double delta) {
  const std::int64_t steps = whole_steps(delta, config_.r0, "shorten");
  std::int64_t current = 0;
  for (const auto& [id, node] : nodes_) current = std::max(current, node.range_steps);
  if (steps >= current) throw InvalidArgument("shorten: delta must be smaller than the current range");

  std::erase_if(nodes_, [&](const auto& entry) { return entry.second.range_steps < steps; });
  for (auto& [id, node] : nodes_) {
    node.range_steps -= steps;
    for (auto* link : {&node.front, &node.left, &node.right}) {
      if (*link && !nodes_.contains(**link)) link->reset();
    }
  }
  config_.rm = static_cast<double>(max_steps() - steps) * config_.r0;
  finalize();
}

void LaneGraph::finalize() {
  const std::size_t n = nodes_.size();
  ids_.clear();
  waypoints_.clear();
  range_steps_.clear();
  ids_.reserve(n);
  waypoints_.reserve(n);
  range_steps_.reserve(n);
  for (const auto& [id, node] : nodes_) {
    ids_.push_back(id);
    waypoints_.push_back(node.waypoint);
    range_steps_.push_back(node.range_steps);
  }

  const auto index_of = [&](const std::optional<VertexId>& id) {
    return id ? find(*id) : kNoVertex;
  };
  front_.assign(n, kNoVertex);
  back_.assign(n, kNoVertex);
  left_.assign(n, kNoVertex);
  right_.assign(n, kNoVertex);
  std::size_t i = 0;
  for (const auto& [id, node] : nodes_) {
    front_[i] = index_of(node.front);
    left_[i] = index_of(node.left);
    right_[i] = index_of(node.right);
    ++i;
  }
  for (std::size_t v = 0; v < n; ++v) {
    const VertexIndex f = front_[v];
    if (f != kNoVertex && back_[static_cast<std::size_t>(f)] == kNoVertex) {
      back_[static_cast<std::size_t>(f)] = static_cast<VertexIndex>(v);
    }
  }
  entrance_.clear();
  exit_.clear();
  for (std::size_t v = 0; v < n; ++v) {
    if (back_[v] == kNoVertex) entrance_.push_back(static_cast<VertexIndex>(v));
    if (front_[v] == kNoVertex) exit_.push_back(static_cast<VertexIndex>(v));
  }

  // Spatial grid.
  cell_start_.clear();
  cell_xs_.clear();
  cell_ys_.clear();
  cell_vertex_.clear();
  grid_nx_ = grid_ny_ = 0;
  if (n == 0) return;
  double min_x = INFINITY, min_y = INFINITY, max_x = -INFINITY, max_y = -INFINITY;
  for (const Waypoint& w : waypoints_) {
    min_x = std::min(min_x, w.x);
    min_y = std::min(min_y, w.y);
    max_x = std::max(max_x, w.x);
    max_y = std::max(max_y, w.y);
  }
  grid_x0_ = min_x;
  grid_y0_ = min_y;
  grid_nx_ = static_cast<std::int64_t>(std::floor((max_x - min_x) / cell_size_)) + 1;
  grid_ny_ = static_cast<std::int64_t>(std::floor((max_y - min_y) / cell_size_)) + 1;
  const auto cells = static_cast<std::size_t>(grid_nx_ * grid_ny_);
  std::vector<std::size_t> cell_of(n);
  cell_start_.assign(cells + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    const auto cx = std::min<std::int64_t>(
        grid_nx_ - 1, static_cast<std::int64_t>((waypoints_[v].x - grid_x0_) / cell_size_));
    const auto cy = std::min<std::int64_t>(
        grid_ny_ - 1, static_cast<std::int64_t>((waypoints_[v].y - grid_y0_) / cell_size_));
    cell_of[v] = static_cast<std::size_t>(cy * grid_nx_ + cx);
    ++cell_start_[cell_of[v] + 1];
  }
  for (std::size_t c = 0; c < cells; ++c) cell_start_[c + 1] += cell_start_[c];
  std::vector<std::uint32_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  cell_xs_.resize(n);
  cell_ys_.resize(n);
  cell_vertex_.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    const std::uint32_t slot = fill[cell_of[v]]++;
    cell_xs_[slot] = waypoints_[v].x;
    cell_ys_[slot] = waypoints_[v].y;
    cell_vertex_[slot] = static_cast<VertexIndex>(v);
  }
}

// ---------------------------------------------------------------------------
// Lookup

double LaneGraph::range(VertexIndex v) const {
  return static_cast<double>(range_steps_[static_cast<std::size_t>(v)]) * config_.r0;
}

VertexIndex LaneGraph::find(VertexId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return kNoVertex;
  return static_cast<VertexIndex>(it - ids_.begin());
}

VertexIndex LaneGraph::beside(VertexIndex v, int lane_offset) const {
  const VertexId key = id(v);
  const int lane = lane_of(key) + lane_offset;
  if (lane < 0) return kNoVertex;
  return find(make_vertex_id(station_index_of(key), lane));
}

VertexIndex LaneGraph::front_n(VertexIndex v, int count) const {
  for (int i = 0; i < count && v != kNoVertex; ++i) v = front(v);
  return v;
}

std::vector<Edge> LaneGraph::edges() const {
  std::vector<Edge> out;
  for (std::size_t v = 0; v < size(); ++v) {
    const auto from = static_cast<VertexIndex>(v);
    if (front_[v] != kNoVertex) out.push_back({from, front_[v], EdgeKind::Front});
    if (left_[v] != kNoVertex) out.push_back({from, left_[v], EdgeKind::Left});
    if (right_[v] != kNoVertex) out.push_back({from, right_[v], EdgeKind::Right});
  }
  return out;
}

VertexIndex LaneGraph::nearest(double x, double y) const {
  if (empty()) throw MapError("nearest: graph is empty");
  const kernels::KernelTable& k = kernels::active();

  const auto qx = static_cast<std::int64_t>(std::floor((x - grid_x0_) / cell_size_));
  const auto qy = static_cast<std::int64_t>(std::floor((y - grid_y0_) / cell_size_));
  const auto outside = [](std::int64_t q, std::int64_t n) -> std::int64_t {
    return q < 0 ? -q : (q >= n ? q - n + 1 : 0);
  };
  const std::int64_t k0 = std::max(outside(qx, grid_nx_), outside(qy, grid_ny_));
  const std::int64_t k_last = k0 + std::max(grid_nx_, grid_ny_);

  double best_d2 = INFINITY;
  VertexIndex best = kNoVertex;
  const auto scan = [&](std::int64_t cx, std::int64_t cy) {
    if (cx < 0 || cy < 0 || cx >= grid_nx_ || cy >= grid_ny_) return;
    const auto c = static_cast<std::size_t>(cy * grid_nx_ + cx);
    const std::size_t b = cell_start_[c];
    const std::size_t e = cell_start_[c + 1];
    if (b == e) return;
    const kernels::Nearest hit =
        k.nearest({cell_xs_.data() + b, e - b}, {cell_ys_.data() + b, e - b}, x, y);
    const VertexIndex v = cell_vertex_[b + hit.index];
    if (hit.dist2 < best_d2 || (hit.dist2 == best_d2 && v < best)) {
      best_d2 = hit.dist2;
      best = v;
    }
  };

  for (std::int64_t ring = k0; ring <= k_last; ++ring) {
    if (best != kNoVertex) {
      const double reach = static_cast<double>(std::max<std::int64_t>(0, ring - 1)) * cell_size_;
      if (reach * reach > best_d2) break;
    }
    for (std::int64_t cy = qy - ring; cy <= qy + ring; ++cy) {
      if (cy < 0 || cy >= grid_ny_) continue;
      if (cy == qy - ring || cy == qy + ring) {
        const std::int64_t lo = std::max<std::int64_t>(0, qx - ring);
        const std::int64_t hi = std::min<std::int64_t>(grid_nx_ - 1, qx + ring);
        for (std::int64_t cx = lo; cx <= hi; ++cx) scan(cx, cy);
      } else {
        scan(qx - ring, cy);
        if (ring > 0) scan(qx + ring, cy);
      }
    }
  }
  return best;
}

FrenetPoint LaneGraph::frenet(double x, double y) const {
  const Waypoint& w = waypoint(nearest(x, y));
  return {w.s, w.l};
}

double LaneGraph::continuous_s(double x, double y, VertexIndex near) const {
  const Waypoint& w = waypoint(near);
  const double along = (x - w.x) * std::cos(w.theta) + (y - w.y) * std::sin(w.theta);
  // Convert arclength along the lane into reference-line station.
  return w.s + along * (1.0 + w.kappa * w.l);
}

void LaneGraph::vertices_in_rect(const kernels::OrientedRect& rect,
                                 std::vector<VertexIndex>& out) const {
  if (empty()) return;
  const kernels::KernelTable& k = kernels::active();
  const double ex = std::abs(rect.cos_theta) * rect.half_length +
                    std::abs(rect.sin_theta) * rect.half_width;
  const double ey = std::abs(rect.sin_theta) * rect.half_length +
                    std::abs(rect.cos_theta) * rect.half_width;
  const auto lo_x = std::max<std::int64_t>(
      0, static_cast<std::int64_t>(std::floor((rect.cx - ex - grid_x0_) / cell_size_)));
  const auto hi_x = std::min<std::int64_t>(
      grid_nx_ - 1, static_cast<std::int64_t>(std::floor((rect.cx + ex - grid_x0_) / cell_size_)));
  const auto lo_y = std::max<std::int64_t>(
      0, static_cast<std::int64_t>(std::floor((rect.cy - ey - grid_y0_) / cell_size_)));
  const auto hi_y = std::min<std::int64_t>(
      grid_ny_ - 1, static_cast<std::int64_t>(std::floor((rect.cy + ey - grid_y0_) / cell_size_)));
  if (lo_x > hi_x || lo_y > hi_y) return;

  thread_local std::vector<std::uint32_t> hits;
  const std::size_t first = out.size();
  for (std::int64_t cy = lo_y; cy <= hi_y; ++cy) {
    for (std::int64_t cx = lo_x; cx <= hi_x; ++cx) {
      const auto c = static_cast<std::size_t>(cy * grid_nx_ + cx);
      const std::size_t b = cell_start_[c];
      const std::size_t e = cell_start_[c + 1];
      if (b == e) continue;
      hits.resize(e - b);
      const std::size_t count =
          k.in_rect({cell_xs_.data() + b, e - b}, {cell_ys_.data() + b, e - b}, rect, hits.data());
      for (std::size_t i = 0; i < count; ++i) out.push_back(cell_vertex_[b + hits[i]]);
    }
  }
  std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end());
}

// ---------------------------------------------------------------------------
// Shortest paths

PathSummary LaneGraph::shortest_paths(VertexIndex p, VertexIndex q, double bound) const {
  require(p >= 0 && q >= 0 && static_cast<std::size_t>(p) < size() &&
              static_cast<std::size_t>(q) < size(),
          "shortest_paths: vertex out of range");
  if (p == q) return {0.0, 1};

  const std::size_t n = size();
  std::vector<double> dist(n, INFINITY);
  std::vector<std::uint64_t> count(n, 0);
  std::vector<char> done(n, 0);
  using Item = std::pair<double, VertexIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;

  dist[static_cast<std::size_t>(p)] = 0.0;
  count[static_cast<std::size_t>(p)] = 1;
  heap.emplace(0.0, p);
  while (!heap.empty()) {
    const auto [du, u] = heap.top();
    heap.pop();
    const auto ui = static_cast<std::size_t>(u);
    if (done[ui]) continue;
    if (du > bound + kLengthEps) break;
    done[ui] = 1;
    if (u == q) break;

    const VertexIndex next[3] = {front_[ui], left_[ui], right_[ui]};
    const double weight[3] = {config_.r0, config_.w0, config_.w0};
    for (int k = 0; k < 3; ++k) {
      const VertexIndex v = next[k];
      if (v == kNoVertex) continue;
      const auto vi = static_cast<std::size_t>(v);
      if (done[vi]) continue;
      const double dv = du + weight[k];
      if (dv < dist[vi] - kLengthEps) {
        dist[vi] = dv;
        count[vi] = count[ui];
        heap.emplace(dv, v);
      } else if (std::abs(dv - dist[vi]) <= kLengthEps) {
        if (__builtin_add_overflow(count[vi], count[ui], &count[vi])) {
          throw Error("shortest_path_count: path count overflows 64 bits");
        }
      }
    }
  }
  const auto qi = static_cast<std::size_t>(q);
  if (!done[qi]) return {};
  return {dist[qi], count[qi]};
}

double LaneGraph::shortest_path_length(VertexIndex p, VertexIndex q) const {
  return shortest_paths(p, q).length;
}

std::uint64_t LaneGraph::shortest_path_count(VertexIndex p, VertexIndex q) const {
  return shortest_paths(p, q).count;
}

// ---------------------------------------------------------------------------
// Occupancy

OccupancyRegistry::OccupancyRegistry(const LaneGraph& graph)
    : graph_(&graph), mask_(graph.size(), 0) {}

std::size_t OccupancyRegistry::check(int slot) {
  if (slot < 0 || slot >= kMaxVehicles) throw InvalidArgument("occupancy: vehicle slot out of range");
  return static_cast<std::size_t>(slot);
}

bool OccupancyRegistry::compute(const VehicleState& state, const VehicleFootprint& fp,
                                std::vector<VertexIndex>& out, double& s) const {
  require(fp.length > 0.0 && fp.width > 0.0, "occupancy: footprint must be positive");
  if (!is_finite(state)) throw InvalidArgument("occupancy: non-finite vehicle state");
  const LaneGraph& g = *graph_;
  if (g.empty()) return false;

  kernels::OrientedRect rect;
  rect.cx = state.x;
  rect.cy = state.y;
  rect.cos_theta = std::cos(state.theta);
  rect.sin_theta = std::sin(state.theta);
  rect.half_length = 0.5 * fp.length + kMargin;
  rect.half_width = 0.5 * fp.width + kMargin;
  out.clear();
  g.vertices_in_rect(rect, out);

  const VertexIndex near = g.nearest(state.x, state.y);
  if (out.empty()) {
    const Waypoint& w = g.waypoint(near);
    const double dist = std::hypot(w.x - state.x, w.y - state.y);
    if (dist > std::max(g.config().w0, g.config().r0)) return false;
    out.push_back(near);
  }
  s = g.continuous_s(state.x, state.y, near);
  return true;
}

std::vector<VertexIndex> OccupancyRegistry::footprint(const VehicleState& state,
                                                      const VehicleFootprint& fp) const {
  std::vector<VertexIndex> out;
  double s = 0.0;
  if (!compute(state, fp, out, s)) throw MapError("occupancy: vehicle is off the graph");
  return out;
}

const std::vector<VertexIndex>& OccupancyRegistry::register_vehicle(int slot,
                                                                    const VehicleState& state,
                                                                    const VehicleFootprint& fp) {
  if (!try_register(slot, state, fp)) {
    throw MapError("occupancy: vehicle " + std::to_string(slot) + " is off the graph");
  }
  return slots_[check(slot)].vertices;
}

bool OccupancyRegistry::try_register(int slot, const VehicleState& state,
                                     const VehicleFootprint& fp) {
  Slot& entry = slots_[check(slot)];
  thread_local std::vector<VertexIndex> scratch;
  double s = 0.0;
  if (!compute(state, fp, scratch, s)) {
    deregister(slot);
    return false;
  }
  const std::uint64_t bit = std::uint64_t{1} << slot;
  for (VertexIndex v : entry.vertices) mask_[static_cast<std::size_t>(v)] &= ~bit;
  entry.vertices.assign(scratch.begin(), scratch.end());
  for (VertexIndex v : entry.vertices) mask_[static_cast<std::size_t>(v)] |= bit;
  entry.registered = true;
  entry.state = state;
  entry.footprint = fp;
  entry.s = s;
  return true;
}

void OccupancyRegistry::deregister(int slot) {
  Slot& entry = slots_[check(slot)];
  const std::uint64_t bit = std::uint64_t{1} << slot;
  for (VertexIndex v : entry.vertices) mask_[static_cast<std::size_t>(v)] &= ~bit;
  entry = Slot{};
}

std::uint64_t OccupancyRegistry::overlapping(int slot) const {
  const Slot& entry = slots_[check(slot)];
  const std::uint64_t bit = std::uint64_t{1} << slot;
  std::uint64_t hits = 0;
  for (VertexIndex v : entry.vertices) hits |= mask_[static_cast<std::size_t>(v)];
  return hits & ~bit;
}

bool OccupancyRegistry::overlaps(int a, int b) const {
  check(b);
  return (overlapping(a) >> b) & 1U;
}

std::vector<int> OccupancyRegistry::lanes(int slot) const {
  std::vector<int> out;
  for (VertexIndex v : slots_[check(slot)].vertices) out.push_back(graph_->waypoint(v).lane);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<Neighbor> OccupancyRegistry::search(int slot, std::optional<int> lane, int offset,
                                                  bool forward) const {
  const Slot& me = slots_[check(slot)];
  if (!me.registered) throw InvalidArgument("occupancy: vehicle is not registered");
  const LaneGraph& g = *graph_;

  const double sign = forward ? 1.0 : -1.0;
  const double half = 0.5 * me.footprint.length;
  VertexIndex v = g.nearest(me.state.x + sign * half * std::cos(me.state.theta),
                            me.state.y + sign * half * std::sin(me.state.theta));
  if (lane) offset = *lane - g.waypoint(v).lane;
  if (offset != 0) v = g.beside(v, offset);
  if (v == kNoVertex) return std::nullopt;

  const double start_s = g.waypoint(v).s;
  const std::uint64_t self = std::uint64_t{1} << slot;
  while (v != kNoVertex) {
    if (std::abs(g.waypoint(v).s - start_s) > kPerceptionRange) break;
    std::uint64_t bits = mask_[static_cast<std::size_t>(v)] & ~self;
    std::optional<Neighbor> best;
    while (bits != 0) {
      const int j = __builtin_ctzll(bits);
      bits &= bits - 1;
      const Slot& other = slots_[static_cast<std::size_t>(j)];
      const double ahead = sign * (other.s - me.s);
      if (ahead <= 0.0) continue;
      const double gap = ahead - 0.5 * (me.footprint.length + other.footprint.length);
      if (!best || gap < best->gap) best = Neighbor{j, gap};
    }
    if (best) return best;
    v = forward ? g.front(v) : g.back(v);
  }
  return std::nullopt;
}

namespace {

int side_offset(LaneSide side) {
  return side == LaneSide::Same ? 0 : (side == LaneSide::Left ? 1 : -1);
}

}  // namespace

std::optional<Neighbor> OccupancyRegistry::leader_of(int slot, LaneSide side) const {
  return search(slot, std::nullopt, side_offset(side), true);
}

std::optional<Neighbor> OccupancyRegistry::follower_of(int slot, LaneSide side) const {
  return search(slot, std::nullopt, side_offset(side), false);
}

std::optional<Neighbor> OccupancyRegistry::leader_on_lane(int slot, int lane) const {
  return search(slot, lane, 0, true);
}

std::optional<Neighbor> OccupancyRegistry::follower_on_lane(int slot, int lane) const {
  return search(slot, lane, 0, false);
}

bool OccupancyRegistry::operator==(const OccupancyRegistry& other) const {
  if (graph_ != other.graph_ || mask_ != other.mask_) return false;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    const Slot& a = slots_[i];
    const Slot& b = other.slots_[i];
    if (a.registered != b.registered || a.vertices != b.vertices) return false;
  }
  return true;
}

}  // namespace felp
