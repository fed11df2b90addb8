#include "felp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "felp/common.hpp"

namespace felp {

double percentile(std::vector<double> values, double p) {
  require(!values.empty(), "percentile: no samples");
  require(p >= 0.0 && p <= 100.0, "percentile: p must lie in [0, 100]");
  std::sort(values.begin(), values.end());
  const double rank = p / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

namespace {

PercentileBand band(const std::vector<double>& values) {
  return {percentile(values, 1.0), percentile(values, 99.0)};
}

}  // namespace

MetricsReport compute_metrics(const std::vector<EgoSample>& samples,
                              const std::vector<double>& plan_ms, std::size_t collisions) {
  require(samples.size() >= 3, "metrics: need at least three samples");
  const double dt = samples[1].time - samples[0].time;
  require(dt > 0.0, "metrics: samples must advance in time");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double step = samples[i].time - samples[i - 1].time;
    if (std::abs(step - dt) > 1e-6 * std::max(1.0, dt)) {
      throw InvalidArgument("metrics: samples are not evenly spaced");
    }
  }

  std::vector<double> jerk, accel, speed, headway, follower;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const EgoSample& s = samples[i];
    accel.push_back(s.accel);
    speed.push_back(s.speed);
    if (i > 0 && i + 1 < samples.size()) {
      jerk.push_back((samples[i + 1].accel - samples[i - 1].accel) / (2.0 * dt));
    }
    if (s.leader_gap && s.speed > 0.0) headway.push_back(*s.leader_gap / s.speed);
    if (s.follower_accel) follower.push_back(*s.follower_accel);
  }

  MetricsReport report;
  report.jerk = band(jerk);
  report.accel = band(accel);
  report.speed = band(speed);
  if (!headway.empty()) report.headway = band(headway);
  if (!follower.empty()) report.induced_brake = percentile(follower, 1.0);
  report.plans = plan_ms.size();
  if (!plan_ms.empty()) {
    report.mean_plan_ms =
        std::accumulate(plan_ms.begin(), plan_ms.end(), 0.0) / static_cast<double>(plan_ms.size());
  }
  report.collisions = collisions;
  report.duration = samples.back().time - samples.front().time;
  return report;
}

}  // namespace felp
