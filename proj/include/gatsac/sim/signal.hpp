#pragma once

#include <array>

#include "gatsac/sim/types.hpp"

namespace gatsac::sim {

struct SignalBounds {
  double g_min = 5.0;
  double g_max = 60.0;
  double c_min = 3.0;
  double t_min = 30.0;
  double t_max = 120.0;
};

// Four-phase plan: 0 = NS through+right, 1 = NS left, 2 = EW through+right,
// 3 = EW left. Every phase block is all-red clearance followed by green, so a
// cycle is C0 G0 C1 G1 C2 G2 C3 G3 and any switch passes through all-red.
struct SignalState {
  int phase = 0;
  bool in_clearance = true;
  double phase_elapsed = 0.0;
  double cycle_elapsed = 0.0;  // since the start of phase 0 clearance
  std::array<double, kNumPhases> greens{30.0, 30.0, 30.0, 30.0};
  std::array<double, kNumPhases> clearances{3.0, 3.0, 3.0, 3.0};
  bool pending_switch = false;
  // Adaptive control keeps the realized cycle within [t_min, t_max] by
  // capping the running green; fixed plans run verbatim.
  bool enforce_cycle_cap = true;
  SignalBounds bounds;
};

// Movements served by each phase.
bool phase_serves(int phase, Movement m, Approach a);
bool lane_green(const SignalState& s, int lane);

// Effective green for the running phase after the cycle cap.
double allowed_green(const SignalState& s);

// Advances the controller clock by dt; consumes pending_switch once the
// minimum green has elapsed.
void signal_advance(SignalState& s, double dt);

// Controller-side observation of the signal: phase one-hot, clearance flag,
// normalized elapsed green and cycle time.
inline constexpr int kSignalFeatureDim = kNumPhases + 3;
std::array<double, kSignalFeatureDim> signal_features(const SignalState& s);

}  // namespace gatsac::sim
