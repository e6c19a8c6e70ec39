#pragma once

#include "gatsac/sim/types.hpp"

namespace gatsac::sim {

// Hard deceleration floor applied to every commanded acceleration.
inline constexpr double kEmergencyDecel = 9.0;  // m/s^2
// Gap value meaning "no leader in range".
inline constexpr double kFreeRoadGap = 1e9;  // m

// Car-following acceleration. dv is own speed minus leader speed (closing
// positive). gap <= 0 means the pair already overlaps: the result is the
// emergency floor and the simulation records a severity event; this function
// never throws for degenerate kinematics.
double idm_acceleration(double v, double gap, double dv, const VehicleClassParams& p);

// Free-road limit of the same law (exactly zero at v == desired_speed).
double idm_free_acceleration(double v, const VehicleClassParams& p);

}  // namespace gatsac::sim
