#pragma once

#include <map>
#include <string>
#include <vector>

#include "gatsac/harness/run.hpp"

namespace gatsac::harness {

// Random-search hyperparameter harness with median pruning. The search space
// is fixed: lr and tau log-uniform, gamma/temperature/entropy-multiplier/
// dropout/clip/objective-weights uniform, batch and hidden dim categorical.
struct TuneSpec {
  int trials = 50;
  int episodes_per_trial = 120;
  int prune_episode = 40;     // single median check
  int objective_window = 50;  // trailing episodes scored
  std::uint64_t seed = 1;
  // test hook: overrides applied on top of the sampled values for a trial
  std::map<int, std::vector<std::pair<std::string, std::string>>> injected;
};

struct SampledParams {
  double lr, tau, gamma;
  int batch_size;
  double init_temperature, entropy_multiplier;
  int gat_hidden_dim;
  double gat_dropout, grad_clip;
  double w_d, w_f, w_s;
};

struct TrialRow {
  int trial = 0;
  bool pruned = false;
  int episodes_run = 0;
  double objective = 0.0;           // final (completed trials)
  double intermediate = 0.0;        // value at the prune check
  SampledParams params{};
};

struct TuneResult {
  std::vector<TrialRow> rows;
  int best_trial = -1;
  double best_objective = 0.0;
  std::string log_csv;
  std::string best_overlay_path;  // config overlay with the winning keys
};

// Samples one point of the search space (draw order fixed for reproducibility).
SampledParams sample_params(Rng& rng);
void apply_params(sim::SimConfig& cfg, const SampledParams& p);

// normalized reward := episode reward sum / simulation step count
double normalized_reward(const sac::EpisodeRow& row, const sim::SimConfig& cfg);

TuneResult run_tune(const sim::SimConfig& base, const TuneSpec& spec, const std::string& out_dir,
                    std::ostream* progress = nullptr);

}  // namespace gatsac::harness
