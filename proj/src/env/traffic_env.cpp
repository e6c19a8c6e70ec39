#include "gatsac/env/traffic_env.hpp"

#include <cmath>
#include <cstdio>

namespace gatsac::env {

TrafficEnv::TrafficEnv(const sim::SimConfig& cfg, bool enforce_cycle_cap)
    : cfg_(cfg), enforce_cycle_cap_(enforce_cycle_cap), horizon_(cfg.episode_length) {
  cfg_.validate();
  state_ = sim::init_simulation(cfg_);
  state_.signal.enforce_cycle_cap = enforce_cycle_cap_;
  graph_ = graph::build_graph(state_);
}

int TrafficEnv::steps_per_action() const {
  return std::max(1, static_cast<int>(std::lround(cfg_.control_interval / cfg_.dt)));
}

bool TrafficEnv::channelization_due() const {
  return state_.time - last_channelization_ >= cfg_.channelization_period - 1e-9;
}

nn::Vec TrafficEnv::signal_features() const {
  const auto f = sim::signal_features(state_.signal);
  return nn::Vec(f.begin(), f.end());
}

const graph::TrafficGraph& TrafficEnv::reset(std::uint64_t seed) {
  sim::SimConfig c = cfg_;
  c.rng_seed = seed;
  cfg_ = c;
  state_ = sim::init_simulation(cfg_);
  state_.signal.enforce_cycle_cap = enforce_cycle_cap_;
  graph_ = graph::build_graph(state_);
  last_channelization_ = -1e18;
  reward_sum_ = 0.0;
  cost_sum_ = 0.0;
  rlr_ = ttc_ = hb_ = 0;
  if (trace_sink_ && trace_sink_->empty()) *trace_sink_ = sim::trace_header() + "\n";
  if (cost_sink_ && cost_sink_->empty()) *cost_sink_ = "t,D,F,S,C_total,reward\n";
  return graph_;
}

const graph::TrafficGraph& TrafficEnv::step(const sim::SignalCommand& cmd, StepInfo& info) {
  info = StepInfo{};
  sim::SignalCommand exec = cmd;
  if (exec.apply_lane_types && channelization_due())
    last_channelization_ = state_.time;
  else
    exec.apply_lane_types = false;

  const int substeps = steps_per_action();
  for (int k = 0; k < substeps && !done(); ++k) {
    const sim::StepOutcome out = sim::step(state_, exec);
    exec.apply_lane_types = false;  // applied at most once per control step
    exec.request_switch = false;    // consumed edge-triggered

    const objectives::CostBreakdown c =
        objectives::step_cost(out, cfg_.weights, cfg_.throughput_bonus);
    info.reward += c.reward;
    info.cost_delay += c.delay;
    info.cost_fairness += c.fairness;
    info.cost_safety += c.safety;
    info.cost_total += c.total;
    info.departed += out.departed;
    info.events += static_cast<int>(out.events.size());
    reward_sum_ += c.reward;
    cost_sum_ += c.total;
    for (const auto& e : out.events) {
      switch (e.kind) {
        case sim::EventKind::RLR: ++rlr_; break;
        case sim::EventKind::TTC: ++ttc_; break;
        case sim::EventKind::HB: ++hb_; break;
      }
    }
    if (trace_sink_) sim::append_trace(state_, *trace_sink_);
    if (cost_sink_) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%.1f,%.6g,%.6g,%.6g,%.6g,%.6g\n", state_.time, c.delay,
                    c.fairness, c.safety, c.total, c.reward);
      *cost_sink_ += buf;
    }
  }
  const double inv = 1.0 / substeps;
  info.reward *= inv;
  info.cost_delay *= inv;
  info.cost_fairness *= inv;
  info.cost_safety *= inv;
  info.cost_total *= inv;
  info.done = done();
  graph_ = graph::build_graph(state_);
  return graph_;
}

TrafficEnv::EpisodeSummary TrafficEnv::summary() const {
  EpisodeSummary s;
  s.reward_sum = reward_sum_;
  s.cost_total_sum = cost_sum_;
  s.spawned = static_cast<int>(state_.total_spawned());
  s.entered = static_cast<int>(state_.total_entered());
  s.departed = static_cast<int>(state_.total_departed());
  s.rlr = rlr_;
  s.ttc = ttc_;
  s.hb = hb_;
  s.events = rlr_ + ttc_ + hb_;
  s.duration = state_.time;
  s.throughput_per_min = state_.time > 0.0 ? s.departed / (state_.time / 60.0) : 0.0;

  // final per-vehicle delays: departures at exit time, everyone else now
  std::array<double, 2> delay_sum = state_.exit_delay_sum;
  std::array<std::uint64_t, 2> count = state_.departed_by_class;
  for (const auto& L : state_.lanes) {
    for (const auto& v : L.vehicles) {
      const auto ci = static_cast<std::size_t>(static_cast<int>(v.cls));
      delay_sum[ci] += sim::vehicle_delay(v, state_.time);
      count[ci] += 1;
    }
    for (const auto& p : L.outside_queue) {
      const auto ci = static_cast<std::size_t>(static_cast<int>(p.cls));
      const double freeflow = cfg_.lane_length / cfg_.class_params(p.cls).desired_speed;
      delay_sum[ci] += std::max(0.0, state_.time - p.arrival_time - freeflow);
      count[ci] += 1;
    }
  }
  const double total = delay_sum[0] + delay_sum[1];
  const std::uint64_t n = count[0] + count[1];
  s.avg_delay = n > 0 ? total / static_cast<double>(n) : 0.0;
  s.cav_delay = count[0] > 0 ? delay_sum[0] / static_cast<double>(count[0]) : 0.0;
  s.hdv_delay = count[1] > 0 ? delay_sum[1] / static_cast<double>(count[1]) : 0.0;
  s.fairness_ratio = (count[0] > 0 && count[1] > 0 && s.cav_delay > 0.0)
                         ? s.hdv_delay / s.cav_delay
                         : 0.0;
  return s;
}

}  // namespace gatsac::env
