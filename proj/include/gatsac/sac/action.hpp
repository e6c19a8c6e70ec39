#pragma once

#include <span>

#include "gatsac/nn/tensor.hpp"
#include "gatsac/sim/conflicts.hpp"
#include "gatsac/sim/simulation.hpp"

namespace gatsac::sac {

// Joint squashed action [a_lane, a_signal, a_conflict]; every raw component
// lies in (-1, 1).
struct ControlAction {
  nn::Vec raw;

  static int lane_dim() { return sim::kNumLanes; }
  static int signal_dim() { return sim::kNumPhases + 1; }  // greens + switch logit
  static int conflict_dim() { return sim::ConflictGeometry::instance().num_pairs(); }
  static int total_dim() { return lane_dim() + signal_dim() + conflict_dim(); }

  std::span<const double> lane() const { return {raw.data(), static_cast<std::size_t>(lane_dim())}; }
  std::span<const double> signal() const {
    return {raw.data() + lane_dim(), static_cast<std::size_t>(signal_dim())};
  }
  std::span<const double> conflict() const {
    return {raw.data() + lane_dim() + signal_dim(), static_cast<std::size_t>(conflict_dim())};
  }
};

// Maps raw components to executable commands: greens via the affine map onto
// [g_min, g_max], switch when the logit is positive (honored after minimum
// green), conflict scores passed through as box-entry priorities. Lane types
// are attached by the caller from the channelization head.
sim::SignalCommand decode_action(const ControlAction& a, const sim::SimConfig& cfg);

}  // namespace gatsac::sac
