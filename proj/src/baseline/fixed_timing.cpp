#include "gatsac/baseline/fixed_timing.hpp"

#include "gatsac/core/error.hpp"

namespace gatsac::baseline {

FixedPlan FixedPlan::from_config(const sim::SimConfig& cfg) {
  FixedPlan p;
  p.greens = cfg.fixed_plan_greens;
  if (p.greens.size() == 1)
    p.greens.assign(sim::kNumPhases, p.greens[0]);
  if (static_cast<int>(p.greens.size()) != sim::kNumPhases)
    throw ConfigError("field fixed_plan_greens: expected " + std::to_string(sim::kNumPhases) +
                      " phases, got " + std::to_string(p.greens.size()));
  p.clearance = cfg.clearance;
  return p;
}

double FixedPlan::cycle_length() const {
  double c = 0.0;
  for (double g : greens) c += g + clearance;
  return c;
}

FixedTimingController::FixedTimingController(const FixedPlan& plan) : plan_(plan) {}

sim::SignalCommand FixedTimingController::act(const sim::SimState&) const {
  sim::SignalCommand cmd;
  for (int k = 0; k < sim::kNumPhases; ++k)
    cmd.greens[static_cast<std::size_t>(k)] = plan_.greens[static_cast<std::size_t>(k)];
  cmd.request_switch = false;
  cmd.apply_lane_types = false;
  cmd.use_priorities = false;
  return cmd;
}

}  // namespace gatsac::baseline
