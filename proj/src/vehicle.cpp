#include "felp/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace felp {

namespace {

struct Derivative {
  double x, y, theta, v, progress;
};

// Duration over which the speed stays non-negative.
double moving_time(double v, double a, double dt) {
  if (a >= 0.0 || v + a * dt >= 0.0) return dt;
  return std::max(0.0, -v / a);
}

void check_step_inputs(const VehicleState& state, double a, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidArgument("step: dt must be positive and finite, got " + std::to_string(dt));
  }
  if (!is_finite(state) || !std::isfinite(a)) {
    throw InvalidArgument("step: non-finite state or control");
  }
}

}  // namespace

bool is_finite(const VehicleState& state) {
  return std::isfinite(state.x) && std::isfinite(state.y) && std::isfinite(state.theta) &&
         std::isfinite(state.v);
}

VehicleControl clamp(const VehicleControl& control, const VehicleLimits& limits) {
  return {std::clamp(control.kappa, -limits.kappa_max, limits.kappa_max),
          std::clamp(control.a, limits.a_min, limits.a_max)};
}

VehicleState step(const VehicleState& state, const VehicleControl& control, double dt) {
  check_step_inputs(state, control.a, dt);
  if (!std::isfinite(control.kappa)) throw InvalidArgument("step: non-finite curvature");

  const double h = moving_time(state.v, control.a, dt);
  const auto f = [&](const VehicleState& s) {
    return Derivative{s.v * std::cos(s.theta), s.v * std::sin(s.theta), s.v * control.kappa,
                      control.a, 0.0};
  };
  const auto offset = [](const VehicleState& s, const Derivative& k, double scale) {
    return VehicleState{s.x + scale * k.x, s.y + scale * k.y, s.theta + scale * k.theta,
                        s.v + scale * k.v};
  };

  VehicleState next = state;
  if (h > 0.0) {
    const Derivative k1 = f(state);
    const Derivative k2 = f(offset(state, k1, 0.5 * h));
    const Derivative k3 = f(offset(state, k2, 0.5 * h));
    const Derivative k4 = f(offset(state, k3, h));
    next.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    next.y += h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
    next.theta += h / 6.0 * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta);
    next.v += h * control.a;
  }
  if (h < dt) next.v = 0.0;
  next.v = std::max(0.0, next.v);
  next.theta = wrap_angle(next.theta);
  return next;
}

TrackingState step_along(const TrackingState& state, const CurvatureProfile& profile, double a,
                         double dt) {
  check_step_inputs(state.vehicle, a, dt);

  const double h = moving_time(state.vehicle.v, a, dt);
  const auto f = [&](const TrackingState& s) {
    const double v = s.vehicle.v;
    return Derivative{v * std::cos(s.vehicle.theta), v * std::sin(s.vehicle.theta),
                      v * profile.curvature_at(s.progress), a, v};
  };
  const auto offset = [](const TrackingState& s, const Derivative& k, double scale) {
    TrackingState out = s;
    out.vehicle.x += scale * k.x;
    out.vehicle.y += scale * k.y;
    out.vehicle.theta += scale * k.theta;
    out.vehicle.v += scale * k.v;
    out.progress += scale * k.progress;
    return out;
  };

  TrackingState next = state;
  if (h > 0.0) {
    const Derivative k1 = f(state);
    const Derivative k2 = f(offset(state, k1, 0.5 * h));
    const Derivative k3 = f(offset(state, k2, 0.5 * h));
    const Derivative k4 = f(offset(state, k3, h));
    next.vehicle.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    next.vehicle.y += h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
    next.vehicle.theta += h / 6.0 * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta);
    next.vehicle.v += h * a;
    // Progress is quadratic in time under constant acceleration; use it exactly.
    next.progress += state.vehicle.v * h + 0.5 * a * h * h;
  }
  if (h < dt) next.vehicle.v = 0.0;
  next.vehicle.v = std::max(0.0, next.vehicle.v);
  next.vehicle.theta = wrap_angle(next.vehicle.theta);
  return next;
}

double time_to_cover(double v, double a, double distance) {
  if (distance <= 0.0) return 0.0;
  if (std::abs(a) < 1e-12) {
    return v > 0.0 ? distance / v : std::numeric_limits<double>::infinity();
  }
  const double disc = v * v + 2.0 * a * distance;
  if (disc < 0.0) return std::numeric_limits<double>::infinity();
  // Numerically stable root of 0.5 a t^2 + v t - distance = 0.
  const double root = v + std::sqrt(disc);
  if (root <= 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * distance / root;
}

}  // namespace felp
