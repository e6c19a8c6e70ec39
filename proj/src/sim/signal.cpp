#include "gatsac/sim/signal.hpp"

#include <algorithm>

namespace gatsac::sim {

namespace {
constexpr double kEps = 1e-9;
}

bool phase_serves(int phase, Movement m, Approach a) {
  const bool ns = (a == Approach::N || a == Approach::S);
  switch (phase) {
    case 0: return ns && m != Movement::Left;
    case 1: return ns && m == Movement::Left;
    case 2: return !ns && m != Movement::Left;
    default: return !ns && m == Movement::Left;
  }
}

std::array<double, kSignalFeatureDim> signal_features(const SignalState& s) {
  std::array<double, kSignalFeatureDim> f{};
  f[static_cast<std::size_t>(s.phase)] = 1.0;
  f[kNumPhases] = s.in_clearance ? 1.0 : 0.0;
  f[kNumPhases + 1] = s.phase_elapsed / std::max(s.bounds.g_max, 1e-9);
  f[kNumPhases + 2] = s.cycle_elapsed / std::max(s.bounds.t_max, 1e-9);
  return f;
}

bool lane_green(const SignalState& s, int lane) {
  if (s.in_clearance) return false;
  return phase_serves(s.phase, lane_movement(lane), lane_approach(lane));
}

double allowed_green(const SignalState& s) {
  const double g = s.greens[static_cast<std::size_t>(s.phase)];
  if (!s.enforce_cycle_cap) return g;
  // Budget so that the remaining phases can still run clearance + minimum
  // green without the cycle exceeding t_max.
  double remaining_min = 0.0;
  for (int k = s.phase + 1; k < kNumPhases; ++k)
    remaining_min += s.clearances[static_cast<std::size_t>(k)] + s.bounds.g_min;
  const double green_started_at = s.cycle_elapsed - s.phase_elapsed;
  const double budget = s.bounds.t_max - green_started_at - remaining_min;
  return std::max(s.bounds.g_min, std::min(budget, g));
}

void signal_advance(SignalState& s, double dt) {
  s.phase_elapsed += dt;
  s.cycle_elapsed += dt;
  if (s.in_clearance) {
    if (s.phase_elapsed >= s.clearances[static_cast<std::size_t>(s.phase)] - kEps) {
      s.in_clearance = false;
      s.phase_elapsed = 0.0;
    }
    return;
  }
  const bool natural_end = s.phase_elapsed >= allowed_green(s) - kEps;
  const bool switched = s.pending_switch && s.phase_elapsed >= s.bounds.g_min - kEps;
  if (natural_end || switched) {
    s.pending_switch = false;
    s.phase = (s.phase + 1) % kNumPhases;
    s.in_clearance = true;
    s.phase_elapsed = 0.0;
    if (s.phase == 0) s.cycle_elapsed = 0.0;
  }
}

}  // namespace gatsac::sim
