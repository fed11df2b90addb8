#include "felp/spiral.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstring>

namespace felp {

namespace {

constexpr int kPanels = 64;  // Simpson panels, even

using Vec4 = Eigen::Vector4d;

struct Residual {
  Vec4 raw;     // x, y, theta, kappa errors at the end
  Vec4 scaled;  // made dimensionless for the Newton iteration
};

}  // namespace

Pose2 SpiralPath::pose_at(double s) const {
  if (s <= 0.0) return {0.0, 0.0, 0.0};
  const double h = s / kPanels;
  double cx = 0.0;
  double sy = 0.0;
  for (int i = 0; i <= kPanels; ++i) {
    const double w = (i == 0 || i == kPanels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const double t = heading(h * i);
    cx += w * std::cos(t);
    sy += w * std::sin(t);
  }
  return {cx * h / 3.0, sy * h / 3.0, heading(s)};
}

double SpiralPath::max_abs_curvature() const {
  double best = std::max(std::abs(curvature(0.0)), std::abs(curvature(length)));
  // Interior extrema where b + 2 c s + 3 d s^2 = 0.
  const auto consider = [&](double s) {
    if (s > 0.0 && s < length) best = std::max(best, std::abs(curvature(s)));
  };
  if (d != 0.0) {
    const double disc = 4.0 * c * c - 12.0 * d * b;
    if (disc >= 0.0) {
      const double root = std::sqrt(disc);
      consider((-2.0 * c + root) / (6.0 * d));
      consider((-2.0 * c - root) / (6.0 * d));
    }
  } else if (c != 0.0) {
    consider(-b / (2.0 * c));
  }
  return best;
}

SpiralPath solve_bvp(const PathEndPoint& target, double kappa0, const SpiralOptions& options) {
  if (!std::isfinite(target.x) || !std::isfinite(target.y) || !std::isfinite(target.theta) ||
      !std::isfinite(target.kappa) || !std::isfinite(kappa0)) {
    throw InvalidArgument("solve_bvp: non-finite boundary condition");
  }
  if (!(target.x > 0.0) || std::abs(target.y) > target.x || std::abs(target.theta) > kPi / 2.0) {
    throw InvalidArgument("solve_bvp: target outside the reachable envelope");
  }

  const double dist = std::hypot(target.x, target.y);
  const double L = dist * (1.0 + target.theta * target.theta / 5.0);

  // Unknowns in scaled form q = (b L, c L^2, d L^3, s_f / L).
  const auto to_path = [&](const Vec4& q) {
    return SpiralPath{kappa0, q[0] / L, q[1] / (L * L), q[2] / (L * L * L), q[3] * L};
  };
  const auto residual = [&](const Vec4& q) {
    const SpiralPath path = to_path(q);
    const Pose2 end = path.pose_at(path.length);
    Residual r;
    r.raw << end.x - target.x, end.y - target.y, end.theta - target.theta,
        path.curvature(path.length) - target.kappa;
    r.scaled << r.raw[0] / L, r.raw[1] / L, r.raw[2], r.raw[3] * L;
    return r;
  };
  const auto converged = [](const Residual& r) {
    return std::abs(r.scaled[0]) < 1e-13 && std::abs(r.scaled[1]) < 1e-13 &&
           std::abs(r.scaled[2]) < 1e-13 && std::abs(r.scaled[3]) < 1e-13;
  };

  constexpr double kStep = 1e-6;
  const auto newton = [&](Vec4 q) {
    Residual r = residual(q);
    for (int iter = 0; iter < options.max_iterations && !converged(r); ++iter) {
      Eigen::Matrix4d jac;
      for (int j = 0; j < 4; ++j) {
        Vec4 hi = q;
        Vec4 lo = q;
        hi[j] += kStep;
        lo[j] -= kStep;
        jac.col(j) = (residual(hi).scaled - residual(lo).scaled) / (2.0 * kStep);
      }
      const Vec4 step = jac.partialPivLu().solve(-r.scaled);
      if (!step.allFinite()) break;

      const double merit = r.scaled.squaredNorm();
      bool accepted = false;
      for (double alpha = 1.0; alpha >= 1.0 / 1024.0; alpha *= 0.5) {
        const Vec4 trial = q + alpha * step;
        if (!(trial[3] > 0.0)) continue;
        const Residual rt = residual(trial);
        if (rt.scaled.squaredNorm() < merit) {
          q = trial;
          r = rt;
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
    }
    return std::pair{q, r};
  };
  const auto within = [&](const Residual& r) {
    return std::hypot(r.raw[0], r.raw[1]) <= options.tol_pos &&
           std::abs(r.raw[2]) <= options.tol_theta && std::abs(r.raw[3]) <= options.tol_kappa;
  };

  auto [q, r] = newton(Vec4(0.0, 0.0, 0.0, 1.0));
  if (!within(r)) {
    // Second start: small-angle solution for (b, c, d) at s_f = L matching
    // y, theta and kappa at the end.
    Eigen::Matrix3d a;
    a << 1.0 / 6.0, 1.0 / 12.0, 1.0 / 20.0,  //
        1.0 / 2.0, 1.0 / 3.0, 1.0 / 4.0,     //
        1.0, 1.0, 1.0;
    const Eigen::Vector3d rhs(target.y / (L * L) - kappa0 / 2.0, target.theta / L - kappa0,
                              target.kappa - kappa0);
    const Eigen::Vector3d bcd = a.partialPivLu().solve(rhs);
    auto [q2, r2] = newton(Vec4(bcd[0], bcd[1], bcd[2], 1.0));
    if (r2.scaled.squaredNorm() < r.scaled.squaredNorm()) {
      q = q2;
      r = r2;
    }
  }

  const SpiralPath path = to_path(q);
  if (!within(r) || !(path.length > 0.0)) {
    throw InfeasibleBoundary("solve_bvp: Newton shooting did not converge");
  }
  if (path.max_abs_curvature() > options.kappa_max) {
    throw InfeasibleBoundary("solve_bvp: path exceeds the curvature limit");
  }
  return path;
}

std::vector<PathSample> sample(const SpiralPath& path, double ds) {
  require(ds > 0.0 && ds <= path.length, "sample: need 0 < ds <= arc length");
  std::vector<PathSample> out;
  const auto count = static_cast<std::size_t>(std::ceil(path.length / ds - 1e-12));
  out.reserve(count + 1);
  for (std::size_t i = 0; i <= count; ++i) {
    const double s = i == count ? path.length : static_cast<double>(i) * ds;
    const Pose2 p = path.pose_at(s);
    out.push_back({s, p.x, p.y, p.theta, path.curvature(s)});
  }
  return out;
}

// ---------------------------------------------------------------------------

bool SpiralCache::Key::operator==(const Key& other) const {
  return std::memcmp(q, other.q, sizeof(q)) == 0;
}

std::size_t SpiralCache::KeyHash::operator()(const Key& key) const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (std::int64_t v : key.q) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

const SpiralPath& SpiralCache::solve(const PathEndPoint& target, double kappa0) {
  const auto quantize = [](double v) { return static_cast<std::int64_t>(std::llround(v * 1e9)); };
  const Key key{{quantize(target.x), quantize(target.y), quantize(target.theta),
                 quantize(target.kappa), quantize(kappa0)}};
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    ++misses_;
    std::optional<SpiralPath> solved;
    try {
      solved = solve_bvp(target, kappa0, options_);
    } catch (const InfeasibleBoundary&) {
    } catch (const InvalidArgument&) {
    }
    it = entries_.emplace(key, solved).first;
  } else {
    ++hits_;
  }
  if (!it->second) throw InfeasibleBoundary("spiral cache: no path to this end point");
  return *it->second;
}

// ---------------------------------------------------------------------------

const char* to_string(Maneuver maneuver) {
  switch (maneuver) {
    case Maneuver::Keep:
      return "keep";
    case Maneuver::Left:
      return "left";
    case Maneuver::Right:
      return "right";
  }
  return "keep";
}

std::vector<EndpointOption> conformal_endpoints(const LaneGraph& graph, VertexIndex from,
                                                const Pose2& origin, int n0) {
  require(n0 >= 1, "conformal_endpoints: n0 must be >= 1");
  require(from >= 0 && static_cast<std::size_t>(from) < graph.size(),
          "conformal_endpoints: vertex out of range");
  std::vector<EndpointOption> out;
  const auto emit = [&](Maneuver m, VertexIndex v) {
    if (v == kNoVertex) return;
    const Waypoint& w = graph.waypoint(v);
    const Pose2 local = to_local(origin, w.pose());
    out.push_back({m, v, {local.x, local.y, local.theta, w.kappa}});
  };

  const VertexIndex ahead = graph.front_n(from, n0);
  emit(Maneuver::Keep, ahead);

  const auto lateral = [&](Maneuver m, auto step) {
    VertexIndex v = ahead != kNoVertex ? step(ahead) : kNoVertex;
    if (v == kNoVertex) {
      const VertexIndex side = step(from);
      if (side != kNoVertex) v = graph.front_n(side, n0);
    }
    emit(m, v);
  };
  lateral(Maneuver::Left, [&](VertexIndex v) { return graph.left(v); });
  lateral(Maneuver::Right, [&](VertexIndex v) { return graph.right(v); });
  return out;
}

}  // namespace felp
