#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace felp {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an input violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Raised when the map cannot answer a query (empty graph, vehicle off the graph).
class MapError : public Error {
 public:
  using Error::Error;
};

/// Raised when an internal invariant is broken.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

constexpr double kPi = std::numbers::pi;

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double angle) {
  double wrapped = std::remainder(angle, 2.0 * kPi);
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

/// Expresses the world point (x, y) in the frame attached to `origin`.
inline Pose2 to_local(const Pose2& origin, const Pose2& world) {
  const double c = std::cos(origin.theta);
  const double s = std::sin(origin.theta);
  const double dx = world.x - origin.x;
  const double dy = world.y - origin.y;
  return {c * dx + s * dy, -s * dx + c * dy, wrap_angle(world.theta - origin.theta)};
}

inline Pose2 to_world(const Pose2& origin, const Pose2& local) {
  const double c = std::cos(origin.theta);
  const double s = std::sin(origin.theta);
  return {origin.x + c * local.x - s * local.y, origin.y + s * local.x + c * local.y,
          wrap_angle(origin.theta + local.theta)};
}

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace felp
