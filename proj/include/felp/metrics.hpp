#pragma once

#include <optional>
#include <vector>

namespace felp {

/// One closed-loop step as seen by the metric reducer.
struct EgoSample {
  double time = 0.0;
  double speed = 0.0;
  double accel = 0.0;
  std::optional<double> leader_gap;       // bumper gap to the leader, if any
  std::optional<double> follower_accel;   // target-lane follower while the ego spans two lanes
};

struct PercentileBand {
  double p01 = 0.0;
  double p99 = 0.0;
};

struct MetricsReport {
  PercentileBand jerk;
  PercentileBand accel;
  PercentileBand speed;
  std::optional<PercentileBand> headway;  // only samples with a leader and v > 0
  std::optional<double> induced_brake;    // 1% percentile of follower acceleration
  double mean_plan_ms = 0.0;
  double mean_rollouts = 0.0;  // filled in by the harness
  std::size_t plans = 0;
  std::size_t collisions = 0;
  double duration = 0.0;
};

/// Linear-interpolation percentile, p in [0, 100]. Throws on an empty input.
double percentile(std::vector<double> values, double p);

/// Reduces an evenly spaced closed-loop trace. Jerk is the central difference
/// of the acceleration samples. Throws InvalidArgument with fewer than three
/// samples or uneven spacing.
MetricsReport compute_metrics(const std::vector<EgoSample>& samples,
                              const std::vector<double>& plan_ms, std::size_t collisions);

}  // namespace felp
