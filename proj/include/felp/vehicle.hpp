#pragma once

#include <limits>

#include "felp/common.hpp"

namespace felp {

/// Pose and speed of one vehicle under the unicycle model.
struct VehicleState {
  double x = 0.0;      // m
  double y = 0.0;      // m
  double theta = 0.0;  // rad, (-pi, pi]
  double v = 0.0;      // m/s, >= 0

  Pose2 pose() const { return {x, y, theta}; }
};

/// Curvature and tangential acceleration applied over one step.
struct VehicleControl {
  double kappa = 0.0;  // 1/m
  double a = 0.0;      // m/s^2
};

struct VehicleFootprint {
  double length = 4.7;  // m
  double width = 1.9;   // m
};

/// Actuation bounds shared by every vehicle in a simulation.
struct VehicleLimits {
  double kappa_max = 0.2;
  double a_min = -8.0;
  double a_max = 4.0;

  static VehicleLimits unbounded_braking() {
    VehicleLimits limits;
    limits.a_min = -std::numeric_limits<double>::infinity();
    limits.a_max = std::numeric_limits<double>::infinity();
    return limits;
  }
};

inline constexpr double kDefaultTimeStep = 0.05;

bool is_finite(const VehicleState& state);

/// Clamps `control` into `limits`.
VehicleControl clamp(const VehicleControl& control, const VehicleLimits& limits);

/// Advances `state` by one RK4 step of the unicycle model
///   x' = v cos(theta), y' = v sin(theta), theta' = v kappa, v' = a
/// with the control held constant. Speed stops at zero; the vehicle never
/// reverses. Throws InvalidArgument on non-finite input or dt <= 0.
VehicleState step(const VehicleState& state, const VehicleControl& control, double dt);

/// Curvature as a function of travelled arclength, used when a vehicle tracks
/// a geometric path exactly.
class CurvatureProfile {
 public:
  virtual ~CurvatureProfile() = default;
  virtual double curvature_at(double arclength) const = 0;
};

/// Unicycle state augmented with travelled arclength along a path.
struct TrackingState {
  VehicleState vehicle;
  double progress = 0.0;
};

/// RK4 step where curvature is read from `profile` at the current progress,
/// so the integrated pose follows the path rather than a piecewise-constant arc.
TrackingState step_along(const TrackingState& state, const CurvatureProfile& profile, double a,
                         double dt);

/// Time needed to cover `distance` starting at speed v with constant
/// acceleration a, or +inf if the vehicle stops first.
double time_to_cover(double v, double a, double distance);

}  // namespace felp
