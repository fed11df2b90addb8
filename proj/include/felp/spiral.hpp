#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "felp/lane_graph.hpp"
#include "felp/vehicle.hpp"

namespace felp {

/// Path boundary condition expressed in the frame of the path start.
struct PathEndPoint {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double kappa = 0.0;
};

/// Raised when no spiral connects the start to the requested end point.
class InfeasibleBoundary : public Error {
 public:
  using Error::Error;
};

/// kappa(s) = kappa0 + b s + c s^2 + d s^3 for s in [0, length], starting at
/// the origin with heading 0.
struct SpiralPath {
  double kappa0 = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double length = 0.0;

  double curvature(double s) const { return kappa0 + s * (b + s * (c + s * d)); }
  double heading(double s) const {
    return s * (kappa0 + s * (b / 2.0 + s * (c / 3.0 + s * d / 4.0)));
  }
  /// Pose at arclength s by Simpson quadrature of the kinematics.
  Pose2 pose_at(double s) const;
  double max_abs_curvature() const;
};

struct SpiralOptions {
  double kappa_max = 0.2;
  double tol_pos = 1e-3;
  double tol_theta = 1e-4;
  double tol_kappa = 1e-4;
  int max_iterations = 50;
};

/// Newton shooting for the spiral reaching `target` from curvature `kappa0`.
/// Throws InvalidArgument when the target lies outside x > 0, |y| <= x,
/// |theta| <= pi/2, and InfeasibleBoundary when the solve does not converge
/// or the path would exceed kappa_max.
SpiralPath solve_bvp(const PathEndPoint& target, double kappa0, const SpiralOptions& options = {});

struct PathSample {
  double s = 0.0;
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double kappa = 0.0;
};

/// Samples at s = 0, ds, 2 ds, ... with the last one exactly at the end.
std::vector<PathSample> sample(const SpiralPath& path, double ds);

/// A spiral anchored at a world pose; the curvature source for path tracking.
class PlacedPath final : public CurvatureProfile {
 public:
  PlacedPath() = default;
  PlacedPath(const Pose2& start, const SpiralPath& spiral) : start_(start), spiral_(spiral) {}

  double curvature_at(double s) const override {
    return spiral_.curvature(std::clamp(s, 0.0, spiral_.length));
  }
  Pose2 pose_at(double s) const { return to_world(start_, spiral_.pose_at(s)); }
  Pose2 end_pose() const { return pose_at(spiral_.length); }

  const Pose2& start() const { return start_; }
  const SpiralPath& spiral() const { return spiral_; }
  double length() const { return spiral_.length; }

 private:
  Pose2 start_;
  SpiralPath spiral_;
};

/// Memoizes solve_bvp, failures included. Keys round the inputs to 1e-9.
class SpiralCache {
 public:
  explicit SpiralCache(SpiralOptions options = {}) : options_(options) {}

  const SpiralPath& solve(const PathEndPoint& target, double kappa0);

  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }
  const SpiralOptions& options() const { return options_; }

 private:
  struct Key {
    std::int64_t q[5];
    bool operator==(const Key& other) const;
  };
  struct KeyHash {
    std::size_t operator()(const Key& key) const;
  };

  SpiralOptions options_;
  std::unordered_map<Key, std::optional<SpiralPath>, KeyHash> entries_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

enum class Maneuver { Keep, Left, Right };

const char* to_string(Maneuver maneuver);

struct EndpointOption {
  Maneuver maneuver = Maneuver::Keep;
  VertexIndex vertex = kNoVertex;
  PathEndPoint local;  // in the frame of `origin`
};

/// Lane-keep, left and right end points `n0` front edges ahead of `from`,
/// expressed in the frame `origin` (normally the pose of `from`). Options the
/// road does not offer are left out.
std::vector<EndpointOption> conformal_endpoints(const LaneGraph& graph, VertexIndex from,
                                                const Pose2& origin, int n0);

}  // namespace felp
