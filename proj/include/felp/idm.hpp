#pragma once

#include <optional>

#include "felp/vehicle.hpp"

namespace felp {

/// Intelligent Driver Model hyper-parameters of one driver.
struct IdmParams {
  double v0 = 20.0;    // desired speed, m/s
  double T = 1.5;      // desired time headway, s
  double s0 = 2.0;     // minimum gap, m
  double alpha = 1.5;  // comfortable acceleration, m/s^2
  double beta = 2.5;   // comfortable braking, m/s^2

  bool valid() const { return v0 > 0.0 && T > 0.0 && s0 > 0.0 && alpha > 0.0 && beta > 0.0; }
};

/// What a driver sees of its leader.
struct LeadObservation {
  double gap = 0.0;      // bumper-to-bumper distance, m
  double delta_v = 0.0;  // own speed minus leader speed, m/s
};

/// IDM acceleration (exponent 4), clamped to the vehicle limits. Without a
/// leader only the free-road term applies. Throws InvalidArgument when the
/// gap is not positive, which means the pair already overlaps.
double idm_acceleration(double v, const std::optional<LeadObservation>& lead,
                        const IdmParams& params, const VehicleLimits& limits = {});

/// Desired following distance at zero relative speed: s0 + v T.
double equilibrium_gap(double v, const IdmParams& params);

/// Longitudinal speed-feedback law shared by the ego and the agents.
/// IDM is the only shipped implementation; the interface leaves room for an
/// ACC-style variant.
class SpeedFeedback {
 public:
  virtual ~SpeedFeedback() = default;
  virtual double acceleration(double v, const std::optional<LeadObservation>& lead,
                              const IdmParams& params) const = 0;
};

class IntelligentDriverModel final : public SpeedFeedback {
 public:
  explicit IntelligentDriverModel(VehicleLimits limits = {}) : limits_(limits) {}

  double acceleration(double v, const std::optional<LeadObservation>& lead,
                      const IdmParams& params) const override {
    return idm_acceleration(v, lead, params, limits_);
  }

  const VehicleLimits& limits() const { return limits_; }

 private:
  VehicleLimits limits_;
};

}  // namespace felp
