#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "felp/io.hpp"
#include "felp/scenario.hpp"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> variant;
  std::optional<std::string> prediction;
  std::optional<double> duration;
  std::optional<int> agents;
  std::string out = "out";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Scenario config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--variant", c.variant, "felp | cfelp | rfelp");
  cmd->add_option("--prediction", c.prediction, "idm | cv");
  cmd->add_option("--duration", c.duration, "Simulated seconds");
  cmd->add_option("--agents", c.agents, "Number of agents");
  cmd->add_option("--out", c.out, "Output directory");
}

felp::ScenarioConfig load(const Common& c) {
  felp::ScenarioConfig cfg = felp::ScenarioConfig::from_file(felp::ConfigFile::load(c.config));
  if (c.seed) cfg.seed = *c.seed;
  if (c.variant) cfg.planner.variant = felp::parse_variant(*c.variant);
  if (c.prediction) cfg.planner.prediction = felp::parse_prediction(*c.prediction);
  if (c.duration) {
    cfg.duration = *c.duration;
    cfg.merge.cap = *c.duration;
  }
  if (c.agents) cfg.agent_count = *c.agents;
  cfg.validate();
  return cfg;
}

void summarize(const felp::RunResult& r) {
  const auto& m = r.metrics;
  std::cout << felp::to_string(r.variant) << "/" << felp::to_string(r.prediction)
            << " agents=" << r.agent_count << " seed=" << r.seed << " duration=" << m.duration
            << "s plans=" << m.plans << " mean_plan_ms=" << m.mean_plan_ms
            << " mean_rollouts=" << m.mean_rollouts << " collisions=" << m.collisions
            << " lane_changes=" << r.lane_changes << " jerk=[" << m.jerk.p01 << ", "
            << m.jerk.p99 << "] accel=[" << m.accel.p01 << ", " << m.accel.p99 << "]\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop lattice planner experiments"};
  app.require_subcommand(1);
  Common merge, highway, density, once;
  auto* merge_cmd = app.add_subcommand("merge", "Merging scene");
  add_common(merge_cmd, merge);
  auto* highway_cmd = app.add_subcommand("highway", "Receding-horizon highway traffic");
  add_common(highway_cmd, highway);
  auto* density_cmd = app.add_subcommand("density", "Highway runs over several agent counts");
  add_common(density_cmd, density);
  auto* once_cmd = app.add_subcommand("plan-once", "Single plan from the initial scene");
  add_common(once_cmd, once);
  CLI11_PARSE(app, argc, argv);

  try {
    if (*merge_cmd) {
      felp::ScenarioConfig cfg = load(merge);
      cfg.kind = felp::ScenarioKind::Merging;
      const felp::RunResult r = felp::run_merging(cfg);
      felp::io::write_run(merge.out, r, cfg.planner.stages(cfg.r0));
      summarize(r);
      std::cout << (r.first_lane_change ? "merged at t=" + std::to_string(*r.first_lane_change) + " s"
                                        : std::string("no merge"))
                << "\n";
    } else if (*highway_cmd) {
      felp::ScenarioConfig cfg = load(highway);
      cfg.kind = felp::ScenarioKind::Highway;
      const felp::RunResult r = felp::run_highway(cfg);
      felp::io::write_run(highway.out, r, cfg.planner.stages(cfg.r0));
      summarize(r);
    } else if (*density_cmd) {
      felp::ScenarioConfig cfg = load(density);
      const auto runs = felp::run_density_sweep(cfg);
      std::filesystem::create_directories(density.out);
      std::vector<double> x, y;
      for (const auto& r : runs) {
        const auto dir = std::filesystem::path(density.out) / ("agents_" + std::to_string(r.agent_count));
        felp::io::write_run(dir, r, cfg.planner.stages(cfg.r0));
        summarize(r);
        x.push_back(r.agent_count);
        y.push_back(r.metrics.mean_plan_ms);
      }
      felp::io::write_metrics_json(std::filesystem::path(density.out) / "metrics.json", runs);
      if (runs.size() >= 2) std::cout << "plan time vs agents R^2=" << felp::linear_fit_r2(x, y) << "\n";
    } else if (*once_cmd) {
      felp::ScenarioConfig cfg = load(once);
      cfg.planner.record_expected_trace = true;
      felp::LaneGraph graph;
      const felp::PlanResult plan = felp::plan_once(cfg, &graph);
      std::filesystem::create_directories(once.out);
      const felp::VehicleFootprint fp;
      felp::io::write_graph_json(std::filesystem::path(once.out) / "graph.json", graph, fp, fp);
      felp::PlanRecord rec;
      rec.total_cost = plan.total_cost;
      for (const auto& p : plan.primitives) rec.maneuvers.push_back(p.maneuver);
      rec.stats = plan.stats;
      rec.agents = cfg.agent_count;
      std::ofstream(std::filesystem::path(once.out) / "planner_stats.jsonl")
          << felp::io::plan_record_json(rec, plan.variant, cfg.planner.stages(cfg.r0)) << "\n";
      std::vector<felp::TraceRow> rows;
      for (const auto& seg : plan.expected) {
        for (const auto& f : seg.trace) {
          rows.push_back({f.time, 0, f.ego.x, f.ego.y, f.ego.theta, f.ego.v, f.ego_accel});
          for (std::size_t i = 0; i < f.agents.size(); ++i) {
            const auto& a = f.agents[i];
            rows.push_back({f.time, static_cast<int>(i) + 1, a.x, a.y, a.theta, a.v, f.agent_accels[i]});
          }
        }
      }
      felp::io::write_trace_csv(std::filesystem::path(once.out) / "trace.csv", rows);
      std::cout << "total_cost=" << plan.total_cost << " rollouts=" << plan.stats.rollouts
                << " wall_ms=" << plan.stats.wall_ms << " maneuvers:";
      for (const auto& p : plan.primitives) std::cout << ' ' << felp::to_string(p.maneuver);
      std::cout << "\n";
    }
  } catch (const felp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
