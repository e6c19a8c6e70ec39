#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gatsac/baseline/fixed_timing.hpp"
#include "gatsac/env/traffic_env.hpp"
#include "gatsac/sac/train.hpp"

namespace gatsac::harness {

// <parent>/<YYYYMMDD-HHMMSS>-seed<seed>; created on demand.
std::string make_run_dir(const std::string& parent, std::uint64_t seed);
void ensure_dir(const std::string& dir);

// Full resolved config + provenance comments; re-parsable as a scenario file.
void write_manifest(const std::string& path, const sim::SimConfig& cfg,
                    const std::vector<std::string>& comments);

struct TrainResult {
  std::vector<sac::EpisodeRow> rows;
  std::string run_dir;
  std::string checkpoint_path;
  std::string metrics_path;
  std::string manifest_path;
};

TrainResult run_train(const sim::SimConfig& cfg, int episodes, const std::string& run_dir,
                      std::ostream* progress = nullptr);

struct EvalRow {
  int run = 0;
  std::uint64_t seed = 0;
  double reward = 0.0;
  double avg_delay = 0.0;
  double hdv_delay = 0.0;
  double cav_delay = 0.0;
  double fairness_ratio = 0.0;
  int vehicles = 0;  // entered the network
  long violations = 0;
  double violations_per_100 = 0.0;
  double throughput_vpm = 0.0;
};

struct EvalResult {
  std::vector<EvalRow> rows;
  EvalRow mean;
  EvalRow stddev;
  std::string csv_path;
};

struct EvalOptions {
  int runs = 20;
  std::uint64_t seed = 1;
  std::optional<double> horizon;  // defaults to cfg.eval_horizon
  std::string dump_dir;           // when set, run 0 writes trace/cost/graph/attention CSVs
};

// Deterministic-policy evaluation of a checkpoint.
EvalResult run_eval_agent(const sim::SimConfig& cfg, const std::string& checkpoint,
                          const EvalOptions& opts, const std::string& out_csv);

// Fixed-timing evaluation (plan from the scenario config).
EvalResult run_eval_baseline(const sim::SimConfig& cfg, const EvalOptions& opts,
                             const std::string& out_csv);

}  // namespace gatsac::harness
