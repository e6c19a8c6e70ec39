#pragma once

#include <vector>

#include "gatsac/sim/simulation.hpp"

namespace gatsac::baseline {

struct FixedPlan {
  std::vector<double> greens;  // one per phase, cycled
  double clearance = 3.0;

  static FixedPlan from_config(const sim::SimConfig& cfg);
  double cycle_length() const;
};

// Deterministic cyclic schedule, blind to traffic state: no switch requests,
// no lane-type changes (everything mixed), no conflict priorities.
class FixedTimingController {
 public:
  explicit FixedTimingController(const FixedPlan& plan);

  sim::SignalCommand act(const sim::SimState& state) const;
  const FixedPlan& plan() const { return plan_; }

 private:
  FixedPlan plan_;
};

}  // namespace gatsac::baseline
