// Compiled with -mavx2 only; callers must check CPU support first.

#include <immintrin.h>

#include <cmath>

#include "felp/kernels.hpp"

namespace felp::kernels {

namespace {

Nearest nearest_avx2(std::span<const double> xs, std::span<const double> ys, double qx,
                     double qy) {
  const std::size_t n = xs.size();
  const std::size_t vec_end = n - n % 4;
  Nearest best{INFINITY, 0};

  if (vec_end > 0) {
    const __m256d vqx = _mm256_set1_pd(qx);
    const __m256d vqy = _mm256_set1_pd(qy);
    __m256d best_d = _mm256_set1_pd(INFINITY);
    __m256d best_i = _mm256_setzero_pd();
    __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    const __m256d four = _mm256_set1_pd(4.0);
    for (std::size_t i = 0; i < vec_end; i += 4) {
      const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs.data() + i), vqx);
      const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys.data() + i), vqy);
      const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      // Strict less-than keeps the first occurrence within each lane.
      const __m256d lt = _mm256_cmp_pd(d2, best_d, _CMP_LT_OQ);
      best_d = _mm256_blendv_pd(best_d, d2, lt);
      best_i = _mm256_blendv_pd(best_i, idx, lt);
      idx = _mm256_add_pd(idx, four);
    }
    alignas(32) double lane_d[4];
    alignas(32) double lane_i[4];
    _mm256_store_pd(lane_d, best_d);
    _mm256_store_pd(lane_i, best_i);
    for (int k = 0; k < 4; ++k) {
      const auto i = static_cast<std::size_t>(lane_i[k]);
      if (lane_d[k] < best.dist2 || (lane_d[k] == best.dist2 && i < best.index)) {
        best = {lane_d[k], i};
      }
    }
  }
  for (std::size_t i = vec_end; i < n; ++i) {
    const double dx = xs[i] - qx;
    const double dy = ys[i] - qy;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best.dist2) best = {d2, i};
  }
  return best;
}

std::size_t in_rect_avx2(std::span<const double> xs, std::span<const double> ys,
                         const OrientedRect& rect, std::uint32_t* out) {
  const std::size_t n = xs.size();
  const std::size_t vec_end = n - n % 4;
  std::size_t count = 0;

  const __m256d cx = _mm256_set1_pd(rect.cx);
  const __m256d cy = _mm256_set1_pd(rect.cy);
  const __m256d c = _mm256_set1_pd(rect.cos_theta);
  const __m256d s = _mm256_set1_pd(rect.sin_theta);
  const __m256d hl = _mm256_set1_pd(rect.half_length);
  const __m256d hw = _mm256_set1_pd(rect.half_width);
  const __m256d sign = _mm256_set1_pd(-0.0);

  for (std::size_t i = 0; i < vec_end; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs.data() + i), cx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys.data() + i), cy);
    const __m256d along = _mm256_add_pd(_mm256_mul_pd(dx, c), _mm256_mul_pd(dy, s));
    const __m256d across = _mm256_sub_pd(_mm256_mul_pd(dy, c), _mm256_mul_pd(dx, s));
    const __m256d in_l = _mm256_cmp_pd(_mm256_andnot_pd(sign, along), hl, _CMP_LE_OQ);
    const __m256d in_w = _mm256_cmp_pd(_mm256_andnot_pd(sign, across), hw, _CMP_LE_OQ);
    int mask = _mm256_movemask_pd(_mm256_and_pd(in_l, in_w));
    while (mask != 0) {
      const int bit = __builtin_ctz(static_cast<unsigned>(mask));
      out[count++] = static_cast<std::uint32_t>(i + static_cast<std::size_t>(bit));
      mask &= mask - 1;
    }
  }
  for (std::size_t i = vec_end; i < n; ++i) {
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

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", &nearest_avx2, &in_rect_avx2};
  return table;
}

}  // namespace felp::kernels
