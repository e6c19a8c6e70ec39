#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gatsac/core/error.hpp"
#include "gatsac/sim/types.hpp"

namespace gatsac::sim {

struct CostWeights {
  double w_d = 1.0;
  double w_f = 0.5;
  double w_s = 2.0;
  double alpha_rlr = 1.0;
  double beta_ttc = 0.5;
  double delta_hb = 0.25;
};

struct SacParams {
  double lr = 3e-5;
  double alpha_lr = 3e-4;  // temperature-specific step size
  double tau = 0.005;
  double gamma = 0.95;
  int batch_size = 64;
  double target_entropy = -4.0;
  double entropy_multiplier = 1.0;
  double init_temperature = 0.01;
  double grad_clip = 1.0;
  double reward_scale = 0.02;  // learner-side reward conditioning
  int warmup_steps = 1000;
  int buffer_capacity = 100000;
  int gat_hidden_dim = 128;
  double gat_dropout = 0.3;
  int actor_hidden1 = 128;
  int actor_hidden2 = 64;
};

// Full scenario description. The flat key=value scenario file uses exactly
// these field names; unknown keys are rejected.
struct SimConfig {
  double dt = 0.1;                 // s
  double demand = 1200.0;          // veh/h, all approaches combined
  double cav_penetration = 0.5;    // rho in [0,1]
  double episode_length = 600.0;   // s (training horizon)
  double eval_horizon = 1000.0;    // s (evaluation horizon)
  int episodes = 300;
  double split_through = 0.6;
  double split_left = 0.25;
  double split_right = 0.15;
  std::uint64_t rng_seed = 1;
  double v2i_period = 0.1;  // s, CAV state refresh

  SafetyThresholds safety;

  double lane_length = 300.0;  // m
  double box_length = 20.0;    // m, straight-through crossing distance

  // signal bounds and plan
  double g_min = 5.0;
  double g_max = 60.0;
  double c_min = 3.0;
  double t_min = 30.0;
  double t_max = 120.0;
  double clearance = 3.0;  // all-red before every green
  std::vector<double> fixed_plan_greens{30.0, 30.0, 30.0, 30.0};

  double control_interval = 10.0;       // s between agent actions
  double channelization_period = 60.0;  // s between lane-type recomputes
  double throughput_bonus = 0.01;       // reward per departed vehicle

  VehicleClassParams cav{0.1, 0.8, 2.0, 3.0, 2.0, 13.89, 4.0};
  VehicleClassParams hdv{1.5, 1.5, 1.5, 2.0, 2.0, 13.89, 4.0};
  double hdv_headway_noise = 0.1;  // multiplicative sigma on HDV headway

  CostWeights weights;
  SacParams sac;

  const VehicleClassParams& class_params(VehClass c) const {
    return c == VehClass::CAV ? cav : hdv;
  }

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// key=value parsing; '#' comment lines and blank lines are ignored.
SimConfig parse_config(std::istream& in, const std::string& source);
SimConfig load_config(const std::string& path);
void save_config(const SimConfig& cfg, const std::string& path);

// Single-key override shared by file parsing and CLI --key value flags.
void apply_override(SimConfig& cfg, const std::string& key, const std::string& value);

std::vector<std::string> config_keys();
std::string get_config_value(const SimConfig& cfg, const std::string& key);
std::string serialize_config(const SimConfig& cfg);  // full resolved key=value body

}  // namespace gatsac::sim
