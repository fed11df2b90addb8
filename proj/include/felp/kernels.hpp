#pragma once

// Data-parallel geometry kernels behind the map queries. Every kernel has a
// scalar reference implementation; vectorized variants must agree with it
// bit for bit and are selected once at startup.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace felp::kernels {

struct OrientedRect {
  double cx = 0.0;
  double cy = 0.0;
  double cos_theta = 1.0;
  double sin_theta = 0.0;
  double half_length = 0.0;
  double half_width = 0.0;
};

struct Nearest {
  double dist2;
  std::size_t index;  // first index attaining dist2
};

/// Squared-distance argmin over the points (xs[i], ys[i]); ties resolve to the
/// lowest index. `xs` and `ys` have equal, non-zero length.
using NearestFn = Nearest (*)(std::span<const double> xs, std::span<const double> ys, double qx,
                              double qy);

/// Writes, in ascending order, the indices of points inside the closed
/// rectangle to `out` (capacity >= xs.size()) and returns how many.
using InRectFn = std::size_t (*)(std::span<const double> xs, std::span<const double> ys,
                                 const OrientedRect& rect, std::uint32_t* out);

struct KernelTable {
  std::string_view name;
  NearestFn nearest;
  InRectFn in_rect;
};

const KernelTable& scalar();

/// AVX2 table, or nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2();

/// Table used by the library. Chosen on first use: AVX2 when available,
/// unless the environment sets FELP_KERNELS=scalar.
const KernelTable& active();

}  // namespace felp::kernels
