#include <cmath>

#include "felp/kernels.hpp"

namespace felp::kernels {

namespace {

Nearest nearest_scalar(std::span<const double> xs, std::span<const double> ys, double qx,
                       double qy) {
  Nearest best{INFINITY, 0};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - qx;
    const double dy = ys[i] - qy;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best.dist2) best = {d2, i};
  }
  return best;
}

std::size_t in_rect_scalar(std::span<const double> xs, std::span<const double> ys,
                           const OrientedRect& rect, std::uint32_t* out) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - rect.cx;
    const double dy = ys[i] - rect.cy;
    const double along = dx * rect.cos_theta + dy * rect.sin_theta;
    const double across = dy * rect.cos_theta - dx * rect.sin_theta;
    if (std::abs(along) <= rect.half_length && std::abs(across) <= rect.half_width) {
      out[count++] = static_cast<std::uint32_t>(i);
    }
  }
  return count;
}

}  // namespace

const KernelTable& scalar() {
  static const KernelTable table{"scalar", &nearest_scalar, &in_rect_scalar};
  return table;
}

}  // namespace felp::kernels
