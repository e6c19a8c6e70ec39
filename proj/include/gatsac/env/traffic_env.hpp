#pragma once

#include <string>

#include "gatsac/graph/traffic_graph.hpp"
#include "gatsac/nn/tensor.hpp"
#include "gatsac/objectives/cost.hpp"

namespace gatsac::env {

// One agent interaction = control_interval seconds of simulation. Rewards are
// the per-substep objective rewards averaged over the interval (unscaled).
class TrafficEnv {
 public:
  explicit TrafficEnv(const sim::SimConfig& cfg, bool enforce_cycle_cap = true);

  struct StepInfo {
    double reward = 0.0;
    double cost_delay = 0.0;
    double cost_fairness = 0.0;
    double cost_safety = 0.0;
    double cost_total = 0.0;
    int departed = 0;
    int events = 0;
    bool done = false;
  };

  const graph::TrafficGraph& reset(std::uint64_t seed);
  const graph::TrafficGraph& step(const sim::SignalCommand& cmd, StepInfo& info);

  bool done() const { return state_.time >= horizon_ - 1e-9; }
  double time() const { return state_.time; }
  const sim::SimState& state() const { return state_; }
  sim::SimState& mutable_state() { return state_; }
  const graph::TrafficGraph& graph() const { return graph_; }
  int steps_per_action() const;
  double horizon() const { return horizon_; }
  void set_horizon(double h) { horizon_ = h; }
  const sim::SimConfig& config() const { return cfg_; }

  // Channelization cadence; commands carry lane types every step but the env
  // applies them only when due.
  bool channelization_due() const;

  // Signal-state observation fed to the policy next to the pooled embedding.
  nn::Vec signal_features() const;

  struct EpisodeSummary {
    double reward_sum = 0.0;      // sum of per-substep rewards (unscaled)
    double cost_total_sum = 0.0;  // sum of per-substep C_total
    int spawned = 0;
    int entered = 0;
    int departed = 0;
    long events = 0;
    long rlr = 0, ttc = 0, hb = 0;
    double avg_delay = 0.0;  // over every spawned vehicle, at exit or episode end
    double hdv_delay = 0.0;
    double cav_delay = 0.0;
    double fairness_ratio = 0.0;  // hdv/cav mean delay; 0 when undefined
    double duration = 0.0;
    double throughput_per_min = 0.0;
  };
  EpisodeSummary summary() const;

  // Optional per-substep artifact sinks.
  void set_trace_sink(std::string* sink) { trace_sink_ = sink; }
  void set_cost_sink(std::string* sink) { cost_sink_ = sink; }

 private:
  sim::SimConfig cfg_;
  bool enforce_cycle_cap_;
  double horizon_;
  sim::SimState state_;
  graph::TrafficGraph graph_;
  double last_channelization_ = -1e18;
  double reward_sum_ = 0.0;
  double cost_sum_ = 0.0;
  long rlr_ = 0, ttc_ = 0, hb_ = 0;
  std::string* trace_sink_ = nullptr;
  std::string* cost_sink_ = nullptr;
};

}  // namespace gatsac::env
