#include "felp/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace felp::io {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out.precision(17);
  return out;
}

json band(const PercentileBand& b) { return {{"p01", b.p01}, {"p99", b.p99}}; }

json report(const RunResult& run) {
  const MetricsReport& m = run.metrics;
  json j;
  j["schema"] = kMetricsSchema;
  j["scenario"] = to_string(run.kind);
  j["variant"] = to_string(run.variant);
  j["prediction"] = to_string(run.prediction);
  j["agents"] = run.agent_count;
  j["seed"] = run.seed;
  j["duration_s"] = m.duration;
  j["jerk"] = band(m.jerk);
  j["accel"] = band(m.accel);
  j["speed"] = band(m.speed);
  j["headway"] = m.headway ? band(*m.headway) : json(nullptr);
  j["induced_brake_p01"] = m.induced_brake ? json(*m.induced_brake) : json(nullptr);
  j["mean_plan_ms"] = m.mean_plan_ms;
  j["mean_rollouts"] = m.mean_rollouts;
  j["plans"] = m.plans;
  j["collisions"] = m.collisions;
  j["lane_changes"] = run.lane_changes;
  j["first_lane_change_s"] =
      run.first_lane_change ? json(*run.first_lane_change) : json(nullptr);
  return j;
}

}  // namespace

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& rows) {
  auto out = open_out(path);
  out << "# schema: " << kTraceSchema << "\n";
  out << "time,vehicle_id,x,y,theta,v,a\n";
  for (const TraceRow& r : rows) {
    out << r.time << ',' << r.vehicle_id << ',' << r.x << ',' << r.y << ',' << r.theta << ','
        << r.v << ',' << r.a << '\n';
  }
}

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::vector<TraceRow> rows;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "time,vehicle_id,x,y,theta,v,a") throw Error("trace.csv: unexpected header");
      header = true;
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw Error("trace.csv: expected 7 columns in '" + line + "'");
    TraceRow r;
    r.time = parse_double(cells[0], "time");
    r.vehicle_id = parse_int(cells[1], "vehicle_id");
    r.x = parse_double(cells[2], "x");
    r.y = parse_double(cells[3], "y");
    r.theta = parse_double(cells[4], "theta");
    r.v = parse_double(cells[5], "v");
    r.a = parse_double(cells[6], "a");
    rows.push_back(r);
  }
  return rows;
}

std::string metrics_json(const RunResult& run) { return report(run).dump(2); }

void write_metrics_json(const std::filesystem::path& path, const RunResult& run) {
  open_out(path) << report(run).dump(2) << '\n';
}

void write_metrics_json(const std::filesystem::path& path, const std::vector<RunResult>& runs) {
  json all = json::array();
  for (const RunResult& r : runs) all.push_back(report(r));
  open_out(path) << all.dump(2) << '\n';
}

std::string plan_record_json(const PlanRecord& r, Variant variant, int horizon_stages) {
  json j;
  j["schema"] = kPlannerStatsSchema;
  j["time"] = r.time;
  j["variant"] = to_string(variant);
  j["horizon_stages"] = horizon_stages;
  j["agents"] = r.agents;
  j["fallback"] = r.fallback;
  j["total_cost"] = r.fallback ? json(nullptr) : json(r.total_cost);
  json maneuvers = json::array();
  for (Maneuver m : r.maneuvers) maneuvers.push_back(to_string(m));
  j["maneuvers"] = maneuvers;
  j["rollouts"] = r.stats.rollouts;
  j["bvp_failures"] = r.stats.bvp_failures;
  j["collisions_pruned"] = r.stats.collisions_pruned;
  j["constraint_rejections"] = r.stats.constraint_rejections;
  j["snapshots"] = r.stats.snapshots;
  j["terminals"] = r.stats.terminals;
  j["wall_ms"] = r.stats.wall_ms;
  return j.dump();
}

void write_planner_stats(const std::filesystem::path& path, const RunResult& run,
                         int horizon_stages) {
  auto out = open_out(path);
  for (const PlanRecord& r : run.plans) out << plan_record_json(r, run.variant, horizon_stages) << '\n';
}

std::string graph_json(const LaneGraph& graph, const VehicleFootprint& ego,
                       const VehicleFootprint& agent) {
  json j;
  j["schema"] = kGraphSchema;
  const GraphConfig& c = graph.config();
  j["config"] = {{"r0", c.r0}, {"rm", c.rm}, {"w0", c.w0}};
  j["footprints"] = {{"ego", {{"length", ego.length}, {"width", ego.width}}},
                     {"agent", {{"length", agent.length}, {"width", agent.width}}}};
  json vertices = json::array();
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const auto v = static_cast<VertexIndex>(i);
    const Waypoint& w = graph.waypoint(v);
    vertices.push_back({{"index", i}, {"id", graph.id(v)}, {"x", w.x}, {"y", w.y},
                        {"theta", w.theta}, {"kappa", w.kappa}, {"lane", w.lane}, {"s", w.s},
                        {"l", w.l}, {"range", graph.range(v)}});
  }
  j["vertices"] = vertices;
  json edges = json::array();
  for (const Edge& e : graph.edges()) {
    const char* kind = e.kind == EdgeKind::Front ? "front" : (e.kind == EdgeKind::Left ? "left" : "right");
    edges.push_back({{"from", e.from}, {"to", e.to}, {"kind", kind}});
  }
  j["edges"] = edges;
  j["entrance"] = graph.entrance();
  j["exit"] = graph.exit();
  return j.dump();
}

void write_graph_json(const std::filesystem::path& path, const LaneGraph& graph,
                      const VehicleFootprint& ego, const VehicleFootprint& agent) {
  open_out(path) << graph_json(graph, ego, agent) << '\n';
}

void write_run(const std::filesystem::path& dir, const RunResult& run, int horizon_stages) {
  std::filesystem::create_directories(dir);
  write_trace_csv(dir / "trace.csv", run.trace);
  write_metrics_json(dir / "metrics.json", run);
  write_planner_stats(dir / "planner_stats.jsonl", run, horizon_stages);
  if (run.initial_graph) {
    write_graph_json(dir / "graph.json", *run.initial_graph, run.ego_footprint,
                     run.agent_footprint);
  }
}

}  // namespace felp::io
