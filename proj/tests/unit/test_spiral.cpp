#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "felp/spiral.hpp"
#include "oracles.hpp"

using namespace felp;

namespace {

using oracle::integrate_spiral;

void expect_reaches(const SpiralPath& p, const PathEndPoint& t, double kappa0) {
  const Pose2 end = integrate_spiral(p);
  EXPECT_LT(std::hypot(end.x - t.x, end.y - t.y), 1e-3);
  EXPECT_LT(std::abs(end.theta - t.theta), 1e-4);
  EXPECT_LT(std::abs(p.curvature(p.length) - t.kappa), 1e-4);
  EXPECT_EQ(p.curvature(0.0), kappa0);
}

}  // namespace

TEST(SpiralBvp, StraightLine) {
  const SpiralPath p = solve_bvp({20.0, 0.0, 0.0, 0.0}, 0.0);
  EXPECT_NEAR(p.length, 20.0, 1e-6);
  EXPECT_NEAR(p.b, 0.0, 1e-6);
  EXPECT_NEAR(p.c, 0.0, 1e-6);
  EXPECT_NEAR(p.d, 0.0, 1e-6);
}

TEST(SpiralBvp, CircularArc) {
  const PathEndPoint t{50.0 * std::sin(0.4), 50.0 * (1.0 - std::cos(0.4)), 0.4, 0.02};
  const SpiralPath p = solve_bvp(t, 0.02);
  EXPECT_NEAR(p.length, 20.0, 1e-6);
  for (double s = 0.0; s <= p.length; s += 1.0) EXPECT_NEAR(p.curvature(s), 0.02, 1e-6);
  for (const PathSample& q : sample(p, 2.5)) {
    EXPECT_NEAR(std::hypot(q.x, q.y - 50.0), 50.0, 1e-6);
  }
}

TEST(SpiralBvp, LaneChange) {
  const PathEndPoint t{40.0, 3.7, 0.0, 0.0};
  const SpiralPath p = solve_bvp(t, 0.0);
  expect_reaches(p, t, 0.0);
  EXPECT_LT(p.max_abs_curvature(), 0.02);
}

TEST(SpiralBvp, RandomTargetsRoundTrip) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> len(8.0, 60.0), k0(-0.05, 0.05), unit(-1.0, 1.0);
  int solved = 0;
  while (solved < 1000) {
    // Forward-generate a smooth spiral so the target is reachable.
    const double L = len(rng);
    SpiralPath gen{k0(rng), 0.08 * unit(rng) / L, 0.08 * unit(rng) / (L * L),
                   0.08 * unit(rng) / (L * L * L), L};
    if (gen.max_abs_curvature() > 0.15) continue;
    const Pose2 end = integrate_spiral(gen);
    const PathEndPoint t{end.x, end.y, end.theta, gen.curvature(L)};
    if (std::abs(t.y) > t.x || std::abs(t.theta) > kPi / 2.0) continue;
    ++solved;
    SpiralPath p;
    ASSERT_NO_THROW(p = solve_bvp(t, gen.kappa0)) << "target " << t.x << " " << t.y << " "
                                                  << t.theta << " " << t.kappa;
    expect_reaches(p, t, gen.kappa0);
    EXPECT_LE(p.max_abs_curvature(), 0.2);
  }
}

TEST(SpiralBvp, LatticeTargetsRoundTrip) {
  for (double y : {-3.7, 0.0, 3.7}) {
    for (double kappa : {-0.01, 0.0, 0.01}) {
      for (double k0 : {-0.01, 0.0, 0.01}) {
        const PathEndPoint t{20.0, y, 20.0 * kappa, kappa};
        expect_reaches(solve_bvp(t, k0), t, k0);
      }
    }
  }
}

TEST(SpiralBvp, MirrorSymmetry) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> x(10.0, 50.0), frac(-0.3, 0.3), th(-0.4, 0.4),
      k(-0.02, 0.02);
  for (int i = 0; i < 200; ++i) {
    const double tx = x(rng);
    const PathEndPoint t{tx, frac(rng) * tx, th(rng), k(rng)};
    const double k0 = k(rng);
    SpiralPath a, b;
    try {
      a = solve_bvp(t, k0);
    } catch (const InfeasibleBoundary&) {
      EXPECT_THROW(solve_bvp({t.x, -t.y, -t.theta, -t.kappa}, -k0), InfeasibleBoundary);
      continue;
    }
    b = solve_bvp({t.x, -t.y, -t.theta, -t.kappa}, -k0);
    EXPECT_NEAR(a.length, b.length, 1e-9);
    EXPECT_NEAR(a.b, -b.b, 1e-9);
    EXPECT_NEAR(a.c, -b.c, 1e-9);
    EXPECT_NEAR(a.d, -b.d, 1e-9);
    const Pose2 pa = a.pose_at(a.length), pb = b.pose_at(b.length);
    EXPECT_NEAR(pa.x, pb.x, 1e-9);
    EXPECT_NEAR(pa.y, -pb.y, 1e-9);
    EXPECT_NEAR(pa.theta, -pb.theta, 1e-9);
  }
}

TEST(SpiralBvp, RejectsTargetsOutsideEnvelope) {
  EXPECT_THROW(solve_bvp({-1.0, 0.0, 0.0, 0.0}, 0.0), InvalidArgument);
  EXPECT_THROW(solve_bvp({5.0, 6.0, 0.0, 0.0}, 0.0), InvalidArgument);
  EXPECT_THROW(solve_bvp({5.0, 0.0, 2.0, 0.0}, 0.0), InvalidArgument);
  EXPECT_THROW(solve_bvp({5.0, 0.0, NAN, 0.0}, 0.0), InvalidArgument);
  // Sharp hook far beyond the curvature limit.
  EXPECT_THROW(solve_bvp({4.0, 3.9, 1.5, 0.0}, 0.0), InfeasibleBoundary);
}

TEST(SpiralSample, CountAndEndpoint) {
  const SpiralPath straight = solve_bvp({20.0, 0.0, 0.0, 0.0}, 0.0);
  const auto s = sample(straight, 3.0);
  EXPECT_EQ(s.size(), static_cast<std::size_t>(std::ceil(straight.length / 3.0)) + 1);
  EXPECT_EQ(s.front().s, 0.0);
  EXPECT_EQ(s.back().s, straight.length);

  const PathEndPoint t{40.0, 3.7, 0.0, 0.0};
  const SpiralPath lc = solve_bvp(t, 0.0);
  const PathSample last = sample(lc, 1.0).back();
  EXPECT_LT(std::hypot(last.x - t.x, last.y - t.y), 1e-3);
  EXPECT_LT(std::abs(last.theta - t.theta), 1e-4);
  EXPECT_THROW(sample(lc, 0.0), InvalidArgument);
  EXPECT_THROW(sample(lc, lc.length + 1.0), InvalidArgument);
}

TEST(SpiralCacheTest, MemoizesResultsAndFailures) {
  SpiralCache cache;
  const PathEndPoint t{20.0, 3.7, 0.0, 0.0};
  const SpiralPath& a = cache.solve(t, 0.0);
  const SpiralPath& b = cache.solve(t, 0.0);
  EXPECT_EQ(&a, &b);
  EXPECT_EQ(cache.misses(), 1u);
  EXPECT_EQ(cache.hits(), 1u);
  const SpiralPath direct = solve_bvp(t, 0.0);
  EXPECT_EQ(a.length, direct.length);
  EXPECT_EQ(a.d, direct.d);
  EXPECT_THROW(cache.solve({4.0, 3.9, 1.5, 0.0}, 0.0), InfeasibleBoundary);
  EXPECT_THROW(cache.solve({4.0, 3.9, 1.5, 0.0}, 0.0), InfeasibleBoundary);
  EXPECT_EQ(cache.misses(), 2u);
  EXPECT_EQ(cache.hits(), 2u);
}

TEST(ConformalEndpoints, ThreeLaneGeometry) {
  const SyntheticRoad road(oracle::straight_road(3, 300.0));
  const LaneGraph g = LaneGraph::build(road, road.require_waypoint(0, 0.0), {1.0, 150.0, 3.7});
  const VertexIndex mid = g.find(make_vertex_id(10, 1));
  const auto opts = conformal_endpoints(g, mid, g.waypoint(mid).pose(), 20);
  ASSERT_EQ(opts.size(), 3u);
  EXPECT_EQ(opts[0].maneuver, Maneuver::Keep);
  EXPECT_EQ(opts[1].maneuver, Maneuver::Left);
  EXPECT_EQ(opts[2].maneuver, Maneuver::Right);
  const double ys[] = {0.0, 3.7, -3.7};
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(opts[i].local.x, 20.0, 1e-12);
    EXPECT_NEAR(opts[i].local.y, ys[i], 1e-12);
    EXPECT_EQ(g.waypoint(opts[i].vertex).s, 30.0);
  }
  const VertexIndex right = g.find(make_vertex_id(10, 0));
  EXPECT_EQ(conformal_endpoints(g, right, g.waypoint(right).pose(), 20).size(), 2u);
}

TEST(ConformalEndpoints, SolidBoundaryAndLaneEnd) {
  RoadDefinition def = oracle::straight_road(2, 300.0);
  def.boundaries = {{0, 0.0, 300.0, LanePermission::None}};
  def.lane_pieces = {{0, 0.0, 25.0}};
  const SyntheticRoad road(def);
  const LaneGraph g = LaneGraph::build(road, road.require_waypoint(0, 0.0), {1.0, 100.0, 3.7});
  const VertexIndex v = g.find(make_vertex_id(0, 0));
  // Lane 0 ends before 20 m ahead of s = 10 and the boundary is solid.
  const VertexIndex late = g.find(make_vertex_id(10, 0));
  EXPECT_TRUE(conformal_endpoints(g, late, g.waypoint(late).pose(), 20).empty());
  const auto opts = conformal_endpoints(g, v, g.waypoint(v).pose(), 20);
  ASSERT_EQ(opts.size(), 1u);
  EXPECT_EQ(opts[0].maneuver, Maneuver::Keep);
}

TEST(ConformalEndpoints, CurvatureConformsToRoad) {
  RoadDefinition def = oracle::straight_road(2, 400.0);
  def.curves = {{0.0, 0.01}};
  const SyntheticRoad road(def);
  const LaneGraph g = LaneGraph::build(road, road.require_waypoint(0, 0.0), {1.0, 100.0, 3.7});
  const VertexIndex v = g.find(make_vertex_id(5, 0));
  for (const EndpointOption& o : conformal_endpoints(g, v, g.waypoint(v).pose(), 20)) {
    EXPECT_EQ(o.local.kappa, g.waypoint(o.vertex).kappa);
    EXPECT_NEAR(o.local.theta, 0.2, 1e-12);
    const SpiralPath p = solve_bvp(o.local, g.waypoint(v).kappa);
    expect_reaches(p, o.local, g.waypoint(v).kappa);
  }
}
