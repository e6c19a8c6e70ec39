#pragma once

#include "gatsac/sim/simulation.hpp"

namespace gatsac::objectives {

struct CostBreakdown {
  double delay = 0.0;     // D(t)
  double fairness = 0.0;  // F(t), in [0,1]
  double safety = 0.0;    // S(t)
  double total = 0.0;     // w_d D + w_f F + w_s S
  double reward = 0.0;    // -total + bonus * departed
  double mean_delay_hdv = 0.0;
  double mean_delay_cav = 0.0;
};

// Mean positive excess over the free-flow budget across present vehicles.
double delay_cost(const sim::SimState& state, double t);

// |d_hdv - d_cav| / max(d_hdv, d_cav); 0 when both means are 0.
double fairness_cost(double mean_delay_hdv, double mean_delay_cav);
// Class-count-aware form: an absent class contributes no disparity.
double fairness_cost(double mean_delay_hdv, double mean_delay_cav, int n_hdv, int n_cav);

// Weighted event counts for one step.
double safety_cost(const std::vector<sim::SafetyEvent>& events, const sim::CostWeights& w);

CostBreakdown total_cost_and_reward(double delay, double fairness, double safety,
                                    const sim::CostWeights& w, int departed,
                                    double throughput_bonus);

// Full per-step breakdown from a step outcome (per-class means come from the
// outcome's waiting accumulators).
CostBreakdown step_cost(const sim::StepOutcome& outcome, const sim::CostWeights& w,
                        double throughput_bonus);

}  // namespace gatsac::objectives
