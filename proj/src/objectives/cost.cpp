#include "gatsac/objectives/cost.hpp"

#include <cmath>

namespace gatsac::objectives {

double delay_cost(const sim::SimState& state, double t) {
  double sum = 0.0;
  int n = 0;
  for (const auto& L : state.lanes) {
    for (const auto& v : L.vehicles) {
      sum += sim::vehicle_delay(v, t);
      ++n;
    }
    // arrived-but-blocked demand waits at the boundary; its time counts
    for (const auto& p : L.outside_queue) {
      const double freeflow =
          state.cfg->lane_length / state.cfg->class_params(p.cls).desired_speed;
      sum += std::max(0.0, t - p.arrival_time - freeflow);
      ++n;
    }
  }
  return n == 0 ? 0.0 : sum / n;
}

double fairness_cost(double mean_delay_hdv, double mean_delay_cav) {
  const double mx = std::max(mean_delay_hdv, mean_delay_cav);
  if (mx <= 0.0) return 0.0;
  return std::fabs(mean_delay_hdv - mean_delay_cav) / mx;
}

double fairness_cost(double mean_delay_hdv, double mean_delay_cav, int n_hdv, int n_cav) {
  if (n_hdv == 0 || n_cav == 0) return 0.0;
  return fairness_cost(mean_delay_hdv, mean_delay_cav);
}

double safety_cost(const std::vector<sim::SafetyEvent>& events, const sim::CostWeights& w) {
  int rlr = 0, ttc = 0, hb = 0;
  for (const auto& e : events) {
    switch (e.kind) {
      case sim::EventKind::RLR: ++rlr; break;
      case sim::EventKind::TTC: ++ttc; break;
      case sim::EventKind::HB: ++hb; break;
    }
  }
  return w.alpha_rlr * rlr + w.beta_ttc * ttc + w.delta_hb * hb;
}

CostBreakdown total_cost_and_reward(double delay, double fairness, double safety,
                                    const sim::CostWeights& w, int departed,
                                    double throughput_bonus) {
  CostBreakdown c;
  c.delay = delay;
  c.fairness = fairness;
  c.safety = safety;
  c.total = w.w_d * delay + w.w_f * fairness + w.w_s * safety;
  c.reward = -c.total + throughput_bonus * departed;
  return c;
}

CostBreakdown step_cost(const sim::StepOutcome& o, const sim::CostWeights& w,
                        double throughput_bonus) {
  const int n_cav = o.present_count[0], n_hdv = o.present_count[1];
  const double d_cav = n_cav > 0 ? o.waiting_sum[0] / n_cav : 0.0;
  const double d_hdv = n_hdv > 0 ? o.waiting_sum[1] / n_hdv : 0.0;
  const int n = n_cav + n_hdv;
  const double delay = n > 0 ? (o.waiting_sum[0] + o.waiting_sum[1]) / n : 0.0;
  const double fair = (n_cav > 0 && n_hdv > 0) ? fairness_cost(d_hdv, d_cav) : 0.0;

  // severity is informational; the cost counts events
  int rlr = 0, ttc = 0, hb = 0;
  for (const auto& e : o.events) {
    switch (e.kind) {
      case sim::EventKind::RLR: ++rlr; break;
      case sim::EventKind::TTC: ++ttc; break;
      case sim::EventKind::HB: ++hb; break;
    }
  }
  const double safety = w.alpha_rlr * rlr + w.beta_ttc * ttc + w.delta_hb * hb;

  CostBreakdown c = total_cost_and_reward(delay, fair, safety, w, o.departed, throughput_bonus);
  c.mean_delay_cav = d_cav;
  c.mean_delay_hdv = d_hdv;
  return c;
}

}  // namespace gatsac::objectives
