#include "gatsac/sim/idm.hpp"

#include <algorithm>
#include <cmath>

namespace gatsac::sim {

double idm_free_acceleration(double v, const VehicleClassParams& p) {
  const double a = p.max_accel * (1.0 - std::pow(v / p.desired_speed, p.accel_exponent));
  return std::max(a, -kEmergencyDecel);
}

double idm_acceleration(double v, double gap, double dv, const VehicleClassParams& p) {
  if (gap <= 0.0) return -kEmergencyDecel;
  if (gap >= 0.5 * kFreeRoadGap) return idm_free_acceleration(v, p);
  const double s_star = p.min_gap + v * p.desired_headway +
                        v * dv / (2.0 * std::sqrt(p.max_accel * p.comfortable_decel));
  const double ratio = s_star / gap;
  const double a = p.max_accel *
                   (1.0 - std::pow(v / p.desired_speed, p.accel_exponent) - ratio * ratio);
  return std::max(a, -kEmergencyDecel);
}

}  // namespace gatsac::sim
