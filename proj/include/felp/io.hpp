#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "felp/scenario.hpp"

namespace felp::io {

/// Schema identifiers written into every output file.
inline constexpr const char* kTraceSchema = "felp.trace/1";
inline constexpr const char* kMetricsSchema = "felp.metrics/1";
inline constexpr const char* kPlannerStatsSchema = "felp.planner_stats/1";
inline constexpr const char* kGraphSchema = "felp.graph/1";

/// trace.csv: a `# schema:` comment line, a header, then one row per vehicle
/// per step.
void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& rows);
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);

std::string metrics_json(const RunResult& run);
void write_metrics_json(const std::filesystem::path& path, const RunResult& run);
/// Array of reports, one per run.
void write_metrics_json(const std::filesystem::path& path, const std::vector<RunResult>& runs);

/// One JSON object per line.
std::string plan_record_json(const PlanRecord& record, Variant variant, int horizon_stages);
void write_planner_stats(const std::filesystem::path& path, const RunResult& run,
                         int horizon_stages);

std::string graph_json(const LaneGraph& graph, const VehicleFootprint& ego,
                       const VehicleFootprint& agent);
void write_graph_json(const std::filesystem::path& path, const LaneGraph& graph,
                      const VehicleFootprint& ego, const VehicleFootprint& agent);

/// Writes every file of a run into `dir` (created when missing).
void write_run(const std::filesystem::path& dir, const RunResult& run, int horizon_stages);

}  // namespace felp::io
