#include "felp/idm.hpp"

#include <algorithm>
#include <cmath>

namespace felp {

double idm_acceleration(double v, const std::optional<LeadObservation>& lead,
                        const IdmParams& params, const VehicleLimits& limits) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("idm: speed must be >= 0");
  if (!params.valid()) throw InvalidArgument("idm: parameters must be strictly positive");

  const double ratio = v / params.v0;
  const double ratio2 = ratio * ratio;
  double a = params.alpha * (1.0 - ratio2 * ratio2);

  if (lead) {
    if (!(lead->gap > 0.0)) {
      throw InvalidArgument("idm: non-positive gap to leader (vehicles overlap)");
    }
    const double dynamic =
        v * params.T + v * lead->delta_v / (2.0 * std::sqrt(params.alpha * params.beta));
    const double desired = params.s0 + std::max(0.0, dynamic);
    const double interaction = desired / lead->gap;
    a -= params.alpha * interaction * interaction;
  }
  return std::clamp(a, limits.a_min, limits.a_max);
}

double equilibrium_gap(double v, const IdmParams& params) {
  if (!(v >= 0.0)) throw InvalidArgument("equilibrium_gap: speed must be >= 0");
  return params.s0 + v * params.T;
}

}  // namespace felp
