#include <gtest/gtest.h>

#include "felp/common.hpp"
#include "felp/metrics.hpp"

using namespace felp;

namespace {

std::vector<EgoSample> ramp(int n, double dt, double slope) {
  std::vector<EgoSample> out;
  for (int i = 0; i < n; ++i) {
    EgoSample s;
    s.time = i * dt;
    s.speed = 10.0;
    s.accel = slope * s.time;
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST(Percentile, HandComputed) {
  EXPECT_DOUBLE_EQ(percentile({3, 1, 2, 4, 5}, 25.0), 2.0);
  EXPECT_DOUBLE_EQ(percentile({1, 2, 3, 4}, 50.0), 2.5);
  EXPECT_DOUBLE_EQ(percentile({7}, 1.0), 7.0);
  std::vector<double> v;
  for (int i = 1; i <= 101; ++i) v.push_back(i);
  EXPECT_DOUBLE_EQ(percentile(v, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(percentile(v, 99.0), 100.0);
  EXPECT_DOUBLE_EQ(percentile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(percentile(v, 100.0), 101.0);
}

TEST(Percentile, RejectsBadInput) {
  EXPECT_THROW(percentile({}, 50.0), InvalidArgument);
  EXPECT_THROW(percentile({1.0}, -1.0), InvalidArgument);
  EXPECT_THROW(percentile({1.0}, 101.0), InvalidArgument);
}

TEST(Metrics, ConstantTraceIsQuiet) {
  const auto samples = ramp(50, 0.05, 0.0);
  const MetricsReport m = compute_metrics(samples, {2.0, 4.0}, 0);
  EXPECT_EQ(m.jerk.p01, 0.0);
  EXPECT_EQ(m.jerk.p99, 0.0);
  EXPECT_EQ(m.accel.p01, 0.0);
  EXPECT_EQ(m.accel.p99, 0.0);
  EXPECT_DOUBLE_EQ(m.speed.p01, 10.0);
  EXPECT_FALSE(m.headway.has_value());
  EXPECT_FALSE(m.induced_brake.has_value());
  EXPECT_DOUBLE_EQ(m.mean_plan_ms, 3.0);
  EXPECT_EQ(m.plans, 2u);
  EXPECT_NEAR(m.duration, 49 * 0.05, 1e-12);
}

TEST(Metrics, LinearAccelerationGivesConstantJerk) {
  // a = 0.5 t sampled at 0.1 s over one second: 11 samples.
  const MetricsReport m = compute_metrics(ramp(11, 0.1, 0.5), {}, 0);
  EXPECT_NEAR(m.jerk.p01, 0.5, 1e-12);
  EXPECT_NEAR(m.jerk.p99, 0.5, 1e-12);
  // Ranks 0.1 and 9.9 into 0, 0.05, ..., 0.5.
  EXPECT_NEAR(m.accel.p01, 0.005, 1e-12);
  EXPECT_NEAR(m.accel.p99, 0.495, 1e-12);
  EXPECT_EQ(m.mean_plan_ms, 0.0);
}

TEST(Metrics, HeadwayAndInducedBrake) {
  auto samples = ramp(5, 0.1, 0.0);
  samples[0].leader_gap = 20.0;  // 2 s at 10 m/s
  samples[1].leader_gap = 30.0;  // 3 s
  samples[2].leader_gap = 5.0;
  samples[2].speed = 0.0;  // excluded
  samples[3].follower_accel = -1.0;
  samples[4].follower_accel = -3.0;
  const MetricsReport m = compute_metrics(samples, {}, 1);
  ASSERT_TRUE(m.headway.has_value());
  EXPECT_NEAR(m.headway->p01, 2.01, 1e-12);
  EXPECT_NEAR(m.headway->p99, 2.99, 1e-12);
  ASSERT_TRUE(m.induced_brake.has_value());
  EXPECT_NEAR(*m.induced_brake, -2.98, 1e-12);
  EXPECT_EQ(m.collisions, 1u);
}

TEST(Metrics, RejectsShortOrUnevenTraces) {
  EXPECT_THROW(compute_metrics(ramp(2, 0.1, 0.0), {}, 0), InvalidArgument);
  auto uneven = ramp(5, 0.1, 0.0);
  uneven[3].time += 0.01;
  EXPECT_THROW(compute_metrics(uneven, {}, 0), InvalidArgument);
  auto frozen = ramp(5, 0.1, 0.0);
  for (auto& s : frozen) s.time = 0.0;
  EXPECT_THROW(compute_metrics(frozen, {}, 0), InvalidArgument);
}
