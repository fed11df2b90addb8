#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "felp/common.hpp"
#include "felp/kernels.hpp"

using namespace felp;

namespace {

struct Cloud {
  std::vector<double> xs, ys;
};

// Snapped to a coarse grid so duplicate points and exact distance ties occur.
Cloud random_cloud(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  Cloud c;
  for (std::size_t i = 0; i < n; ++i) {
    c.xs.push_back(std::round(u(rng)));
    c.ys.push_back(std::round(u(rng) / 10.0) * 3.7);
  }
  return c;
}

kernels::OrientedRect random_rect(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-40.0, 40.0), ang(-kPi, kPi), len(0.5, 15.0);
  const double a = ang(rng);
  return {pos(rng), pos(rng), std::cos(a), std::sin(a), len(rng), len(rng) / 3.0};
}

}  // namespace

TEST(Kernels, ScalarNearestMatchesLinearScan) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const Cloud c = random_cloud(rng, 1 + static_cast<std::size_t>(trial));
    const double qx = static_cast<double>(trial % 7), qy = 1.85;
    const kernels::Nearest got = kernels::scalar().nearest(c.xs, c.ys, qx, qy);
    std::size_t best = 0;
    double best_d2 = INFINITY;
    for (std::size_t i = 0; i < c.xs.size(); ++i) {
      const double d2 = (c.xs[i] - qx) * (c.xs[i] - qx) + (c.ys[i] - qy) * (c.ys[i] - qy);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    }
    EXPECT_EQ(got.index, best);
    EXPECT_EQ(got.dist2, best_d2);
  }
}

TEST(Kernels, ScalarInRectMatchesDefinition) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const Cloud c = random_cloud(rng, 64);
    const auto r = random_rect(rng);
    std::vector<std::uint32_t> out(c.xs.size());
    const std::size_t n = kernels::scalar().in_rect(c.xs, c.ys, r, out.data());
    std::vector<std::uint32_t> expected;
    for (std::size_t i = 0; i < c.xs.size(); ++i) {
      const double dx = c.xs[i] - r.cx, dy = c.ys[i] - r.cy;
      const double along = r.cos_theta * dx + r.sin_theta * dy;
      const double across = -r.sin_theta * dx + r.cos_theta * dy;
      if (std::abs(along) <= r.half_length && std::abs(across) <= r.half_width) {
        expected.push_back(static_cast<std::uint32_t>(i));
      }
    }
    out.resize(n);
    EXPECT_EQ(out, expected);
  }
}

TEST(Kernels, Avx2AgreesWithScalarBitForBit) {
  const kernels::KernelTable* vec = kernels::avx2();
  if (vec == nullptr) GTEST_SKIP() << "AVX2 not available";
  const kernels::KernelTable& ref = kernels::scalar();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const Cloud c = random_cloud(rng, 1 + static_cast<std::size_t>(trial % 77));
    std::uniform_real_distribution<double> q(-60.0, 60.0);
    const double qx = q(rng), qy = q(rng);
    const kernels::Nearest a = ref.nearest(c.xs, c.ys, qx, qy);
    const kernels::Nearest b = vec->nearest(c.xs, c.ys, qx, qy);
    ASSERT_EQ(a.index, b.index);
    ASSERT_EQ(a.dist2, b.dist2);

    const auto r = random_rect(rng);
    std::vector<std::uint32_t> oa(c.xs.size()), ob(c.xs.size());
    const std::size_t na = ref.in_rect(c.xs, c.ys, r, oa.data());
    const std::size_t nb = vec->in_rect(c.xs, c.ys, r, ob.data());
    ASSERT_EQ(na, nb);
    oa.resize(na);
    ob.resize(nb);
    ASSERT_EQ(oa, ob);
  }
}

TEST(Kernels, NearestTieGoesToLowestIndex) {
  const std::vector<double> xs{1.0, -1.0, 1.0, 0.0, 1.0, -1.0, 1.0, -1.0, 1.0};
  const std::vector<double> ys(xs.size(), 0.0);
  for (const kernels::KernelTable* t : {&kernels::scalar(), kernels::avx2()}) {
    if (t == nullptr) continue;
    EXPECT_EQ(t->nearest(xs, ys, 0.0, 5.0).index, 3u) << t->name;
    EXPECT_EQ(t->nearest(xs, ys, 0.6, 0.0).index, 0u) << t->name;
    EXPECT_EQ(t->nearest(xs, ys, -0.6, 0.0).index, 1u) << t->name;
  }
}

TEST(Kernels, ActiveTableIsOneOfTheVariants) {
  const kernels::KernelTable& a = kernels::active();
  EXPECT_TRUE(&a == &kernels::scalar() || &a == kernels::avx2());
}
