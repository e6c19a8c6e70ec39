// Command-line front end: train, eval, baseline, sweep, tune.
//
// Configuration precedence: built-in defaults < scenario file (--config) <
// per-key command-line overrides (--<key> <value>, keys as in the scenario
// format). Every command writes its artifacts into a run directory named
// <out>/<timestamp>-seed<seed> unless --run-dir pins an exact path.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gatsac/core/error.hpp"
#include "gatsac/harness/run.hpp"
#include "gatsac/harness/sweep.hpp"
#include "gatsac/harness/tune.hpp"

namespace {

using gatsac::sim::SimConfig;

struct ConfigArgs {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
};

void add_config_options(CLI::App* cmd, ConfigArgs& args) {
  cmd->add_option("--config", args.config_path, "scenario config file (key=value)");
  for (const auto& key : gatsac::sim::config_keys()) {
    cmd->add_option_function<std::string>(
           "--" + key,
           [key, &args](const std::string& v) { args.overrides.emplace_back(key, v); },
           "override config key " + key)
        ->expected(1);
  }
}

SimConfig resolve_config(const ConfigArgs& args) {
  SimConfig cfg;
  if (!args.config_path.empty()) cfg = gatsac::sim::load_config(args.config_path);
  for (const auto& [k, v] : args.overrides) gatsac::sim::apply_override(cfg, k, v);
  cfg.validate();
  return cfg;
}

std::string pick_run_dir(const std::string& run_dir, const std::string& out,
                         std::uint64_t seed) {
  if (!run_dir.empty()) {
    gatsac::harness::ensure_dir(run_dir);
    return run_dir;
  }
  return gatsac::harness::make_run_dir(out, seed);
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixed-autonomy intersection control: GAT-SAC training and evaluation"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "train a GAT-SAC policy");
  ConfigArgs train_cfg;
  add_config_options(train, train_cfg);  // --episodes comes from the config keys
  std::string train_out = "runs", train_run_dir;
  bool quiet = false;
  train->add_option("--out", train_out, "parent directory for the run dir");
  train->add_option("--run-dir", train_run_dir, "exact run directory");
  train->add_flag("--quiet", quiet, "suppress per-episode progress");

  // eval / baseline share their options
  struct EvalArgs {
    ConfigArgs cfg;
    std::string checkpoint;
    int runs = 20;
    std::string out = "runs", run_dir;
    bool dump = false;
    double horizon = -1.0;
  };
  EvalArgs eval_args, base_args;
  auto add_eval_options = [](CLI::App* cmd, EvalArgs& a, bool with_checkpoint) {
    add_config_options(cmd, a.cfg);
    if (with_checkpoint)
      cmd->add_option("--checkpoint", a.checkpoint, "trained checkpoint")->required();
    cmd->add_option("--runs", a.runs, "evaluation runs");
    cmd->add_option("--out", a.out, "parent directory for the run dir");
    cmd->add_option("--run-dir", a.run_dir, "exact run directory");
    cmd->add_flag("--dump", a.dump, "write trace/cost/graph/attention CSVs for run 0");
    cmd->add_option("--horizon", a.horizon, "evaluation horizon seconds (default eval_horizon)");
  };
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint with the deterministic policy");
  add_eval_options(eval, eval_args, true);
  auto* base = app.add_subcommand("baseline", "evaluate the fixed-timing controller");
  add_eval_options(base, base_args, false);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "CAV-penetration x density sweep");
  ConfigArgs sweep_cfg;
  add_config_options(sweep, sweep_cfg);
  std::string sweep_ckpt, sweep_out = "runs", sweep_run_dir;
  std::string penetrations = "0,0.2,0.4,0.6,0.8,1.0", densities = "600,1200,1800";
  int sweep_runs = 20;
  sweep->add_option("--checkpoint", sweep_ckpt, "checkpoint (omit for the fixed baseline)");
  sweep->add_option("--penetrations", penetrations, "comma list of CAV penetration levels");
  sweep->add_option("--densities", densities, "comma list of demands (veh/h)");
  sweep->add_option("--runs", sweep_runs, "runs per cell");
  sweep->add_option("--out", sweep_out, "parent directory for the run dir");
  sweep->add_option("--run-dir", sweep_run_dir, "exact run directory");

  // tune
  auto* tune = app.add_subcommand("tune", "random search with median pruning");
  ConfigArgs tune_cfg;
  add_config_options(tune, tune_cfg);
  gatsac::harness::TuneSpec tune_spec;
  std::string tune_out = "runs", tune_run_dir;
  tune->add_option("--trials", tune_spec.trials, "trial count");
  tune->add_option("--trial-episodes", tune_spec.episodes_per_trial, "episodes per trial");
  tune->add_option("--prune-episode", tune_spec.prune_episode, "median-prune check episode");
  tune->add_option("--window", tune_spec.objective_window, "objective window (episodes)");
  tune->add_option("--out", tune_out, "parent directory for the run dir");
  tune->add_option("--run-dir", tune_run_dir, "exact run directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      const SimConfig cfg = resolve_config(train_cfg);
      const int episodes = cfg.episodes;
      const std::string dir = pick_run_dir(train_run_dir, train_out, cfg.rng_seed);
      const auto res =
          gatsac::harness::run_train(cfg, episodes, dir, quiet ? nullptr : &std::cerr);
      std::cout << "run_dir=" << res.run_dir << "\n"
                << "checkpoint=" << res.checkpoint_path << "\n"
                << "metrics=" << res.metrics_path << "\n";
    } else if (*eval || *base) {
      EvalArgs& a = *eval ? eval_args : base_args;
      const SimConfig cfg = resolve_config(a.cfg);
      const std::string dir = pick_run_dir(a.run_dir, a.out, cfg.rng_seed);
      gatsac::harness::EvalOptions opts;
      opts.runs = a.runs;
      opts.seed = cfg.rng_seed;
      if (a.horizon > 0) opts.horizon = a.horizon;
      if (a.dump) opts.dump_dir = dir + "/dump";
      gatsac::harness::write_manifest(dir + "/manifest.txt", cfg,
                                      {*eval ? "command=eval" : "command=baseline",
                                       "runs=" + std::to_string(a.runs)});
      const auto res = *eval
                           ? gatsac::harness::run_eval_agent(cfg, a.checkpoint, opts,
                                                             dir + "/eval.csv")
                           : gatsac::harness::run_eval_baseline(cfg, opts, dir + "/eval.csv");
      std::cout << "summary=" << res.csv_path << "\n"
                << "mean_delay=" << res.mean.avg_delay << " reward=" << res.mean.reward
                << " violations_per_100=" << res.mean.violations_per_100
                << " throughput_vpm=" << res.mean.throughput_vpm << "\n";
    } else if (*sweep) {
      const SimConfig cfg = resolve_config(sweep_cfg);
      gatsac::harness::SweepSpec spec;
      spec.penetrations = parse_list(penetrations);
      spec.densities = parse_list(densities);
      spec.runs = sweep_runs;
      spec.seed = cfg.rng_seed;
      const std::string dir = pick_run_dir(sweep_run_dir, sweep_out, cfg.rng_seed);
      const auto res = gatsac::harness::run_sweep(cfg, spec, sweep_ckpt, dir, &std::cerr);
      std::cout << "raw=" << res.raw_csv << "\nsummary=" << res.summary_csv << "\n";
      for (const auto& p : res.svg_paths) std::cout << "plot=" << p << "\n";
    } else if (*tune) {
      const SimConfig cfg = resolve_config(tune_cfg);
      tune_spec.seed = cfg.rng_seed;
      const std::string dir = pick_run_dir(tune_run_dir, tune_out, cfg.rng_seed);
      const auto res = gatsac::harness::run_tune(cfg, tune_spec, dir, &std::cerr);
      std::cout << "trials=" << res.log_csv << "\n";
      if (res.best_trial >= 0)
        std::cout << "best_trial=" << res.best_trial << " objective=" << res.best_objective
                  << "\nbest_params=" << res.best_overlay_path << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
