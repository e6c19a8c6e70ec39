#include "gatsac/harness/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>

#include "gatsac/core/csv.hpp"
#include "gatsac/core/error.hpp"
#include "gatsac/core/stats.hpp"

namespace gatsac::harness {

namespace fs = std::filesystem;

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory: " + dir + " (" + ec.message() + ")");
}

std::string make_run_dir(const std::string& parent, std::uint64_t seed) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  localtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", &tm);
  const std::string dir =
      parent + "/" + stamp + "-seed" + std::to_string(seed);
  ensure_dir(dir);
  return dir;
}

void write_manifest(const std::string& path, const sim::SimConfig& cfg,
                    const std::vector<std::string>& comments) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "# run manifest: every artifact below is regenerable from this file alone\n";
  out << "# normalized_reward := episode reward sum / simulation step count\n";
  for (const auto& c : comments) out << "# " << c << "\n";
  out << sim::serialize_config(cfg);
  if (!out) throw IoError("write failure: " + path);
}

TrainResult run_train(const sim::SimConfig& cfg, int episodes, const std::string& run_dir,
                      std::ostream* progress) {
  cfg.validate();
  ensure_dir(run_dir);
  TrainResult res;
  res.run_dir = run_dir;
  res.manifest_path = run_dir + "/manifest.txt";
  res.metrics_path = run_dir + "/metrics.csv";
  res.checkpoint_path = run_dir + "/checkpoint.txt";
  write_manifest(res.manifest_path, cfg,
                 {"command=train", "episodes=" + std::to_string(episodes)});

  env::TrafficEnv env(cfg);
  sac::SacAgent agent(cfg, cfg.rng_seed);

  CsvWriter metrics(res.metrics_path, {"episode", "reward", "throughput", "delay", "violations",
                                       "critic_loss", "actor_loss", "alpha"});
  sac::TrainOptions opts;
  opts.progress = progress;
  opts.on_episode = [&](const sac::EpisodeRow& r) {
    metrics.row({std::to_string(r.episode), format_double(r.reward), std::to_string(r.throughput),
                 format_double(r.avg_delay), std::to_string(r.violations),
                 format_double(r.critic_loss), format_double(r.actor_loss),
                 format_double(r.alpha)});
    metrics.flush();
  };
  res.rows = sac::train_agent(env, agent, episodes, opts);
  agent.save(res.checkpoint_path);
  return res;
}

namespace {

using CommandFn =
    std::function<sim::SignalCommand(const graph::TrafficGraph&, const sim::SimState&)>;

EvalRow summarize(const env::TrafficEnv& env, int run, std::uint64_t seed) {
  const auto s = env.summary();
  EvalRow row;
  row.run = run;
  row.seed = seed;
  row.reward = s.reward_sum;
  row.avg_delay = s.avg_delay;
  row.hdv_delay = s.hdv_delay;
  row.cav_delay = s.cav_delay;
  row.fairness_ratio = s.fairness_ratio;
  row.vehicles = s.entered;
  row.violations = s.events;
  row.violations_per_100 = s.entered > 0 ? 100.0 * static_cast<double>(s.events) / s.entered : 0.0;
  row.throughput_vpm = s.throughput_per_min;
  return row;
}

std::vector<std::string> eval_header() {
  return {"run", "seed", "reward", "avg_delay", "hdv_delay", "cav_delay", "fairness_ratio",
          "vehicles", "violations", "violations_per_100", "throughput_vpm"};
}

std::vector<std::string> eval_cells(const std::string& run_label, const EvalRow& r) {
  return {run_label, std::to_string(r.seed), format_double(r.reward), format_double(r.avg_delay),
          format_double(r.hdv_delay), format_double(r.cav_delay), format_double(r.fairness_ratio),
          std::to_string(r.vehicles), std::to_string(r.violations),
          format_double(r.violations_per_100), format_double(r.throughput_vpm)};
}

EvalResult eval_common(const sim::SimConfig& cfg, const EvalOptions& opts,
                       const std::string& out_csv, bool cycle_cap, const CommandFn& controller,
                       const std::function<void(env::TrafficEnv&, int)>& dump_hook) {
  EvalResult res;
  sim::SimConfig ecfg = cfg;
  ecfg.episode_length = opts.horizon.value_or(cfg.eval_horizon);

  for (int run = 0; run < opts.runs; ++run) {
    env::TrafficEnv env(ecfg, cycle_cap);
    const std::uint64_t seed = Rng(opts.seed).fork(static_cast<std::uint64_t>(run) + 1).seed();
    std::string trace, costs;
    const bool dump = run == 0 && !opts.dump_dir.empty();
    if (dump) {
      env.set_trace_sink(&trace);
      env.set_cost_sink(&costs);
    }
    const graph::TrafficGraph* g = &env.reset(seed);
    while (!env.done()) {
      env::TrafficEnv::StepInfo info;
      g = &env.step(controller(*g, env.state()), info);
    }
    res.rows.push_back(summarize(env, run, seed));
    if (dump) {
      ensure_dir(opts.dump_dir);
      std::ofstream(opts.dump_dir + "/trace.csv") << trace;
      std::ofstream(opts.dump_dir + "/costs.csv") << costs;
      graph::write_graph_csv(env.graph(), opts.dump_dir + "/graph_snapshot.csv");
      if (dump_hook) dump_hook(env, run);
    }
  }

  // aggregate
  auto agg = [&](auto member) {
    std::vector<double> xs;
    for (const auto& r : res.rows) xs.push_back(static_cast<double>(r.*member));
    return std::pair{mean(xs), sample_stddev(xs)};
  };
  auto [rm, rs] = agg(&EvalRow::reward);
  res.mean.reward = rm; res.stddev.reward = rs;
  auto [dm, ds] = agg(&EvalRow::avg_delay);
  res.mean.avg_delay = dm; res.stddev.avg_delay = ds;
  auto [hm, hs] = agg(&EvalRow::hdv_delay);
  res.mean.hdv_delay = hm; res.stddev.hdv_delay = hs;
  auto [cm, cs] = agg(&EvalRow::cav_delay);
  res.mean.cav_delay = cm; res.stddev.cav_delay = cs;
  auto [fm, fsd] = agg(&EvalRow::fairness_ratio);
  res.mean.fairness_ratio = fm; res.stddev.fairness_ratio = fsd;
  auto [vm, vs] = agg(&EvalRow::violations_per_100);
  res.mean.violations_per_100 = vm; res.stddev.violations_per_100 = vs;
  auto [tm, ts] = agg(&EvalRow::throughput_vpm);
  res.mean.throughput_vpm = tm; res.stddev.throughput_vpm = ts;

  if (!out_csv.empty()) {
    CsvWriter w(out_csv, eval_header());
    for (const auto& r : res.rows) w.row(eval_cells(std::to_string(r.run), r));
    w.row(eval_cells("mean", res.mean));
    w.row(eval_cells("std", res.stddev));
    res.csv_path = out_csv;
  }
  return res;
}

}  // namespace

EvalResult run_eval_agent(const sim::SimConfig& cfg, const std::string& checkpoint,
                          const EvalOptions& opts, const std::string& out_csv) {
  auto agent = std::make_shared<sac::SacAgent>(cfg, cfg.rng_seed);
  agent->load(checkpoint);
  auto controller = [agent](const graph::TrafficGraph& g,
                            const sim::SimState& st) -> sim::SignalCommand {
    const auto ar = agent->act(g, sim::signal_features(st.signal),
                               sac::ActMode::Deterministic, /*train_mode=*/false);
    return agent->command_from(ar);
  };
  return eval_common(cfg, opts, out_csv, /*cycle_cap=*/true, controller,
                     [agent, &opts](env::TrafficEnv& env, int) {
                       const auto mats = agent->encoder().attention_matrices(env.graph());
                       for (std::size_t k = 0; k < mats.size(); ++k) {
                         const std::string name =
                             opts.dump_dir + "/" +
                             (k + 1 < mats.size() ? "attention_l1_h" + std::to_string(k) + ".csv"
                                                  : "attention_l2.csv");
                         std::vector<std::string> header{"node"};
                         for (int j = 0; j < sim::kNumLanes; ++j)
                           header.push_back("to_" + std::to_string(j));
                         CsvWriter w(name, header);
                         for (int i = 0; i < sim::kNumLanes; ++i) {
                           std::vector<std::string> cells{std::to_string(i)};
                           for (int j = 0; j < sim::kNumLanes; ++j)
                             cells.push_back(format_double(mats[k](i, j)));
                           w.row(cells);
                         }
                       }
                     });
}

EvalResult run_eval_baseline(const sim::SimConfig& cfg, const EvalOptions& opts,
                             const std::string& out_csv) {
  const baseline::FixedPlan plan = baseline::FixedPlan::from_config(cfg);
  baseline::FixedTimingController ctrl(plan);
  auto controller = [ctrl](const graph::TrafficGraph&,
                           const sim::SimState& s) -> sim::SignalCommand { return ctrl.act(s); };
  return eval_common(cfg, opts, out_csv, /*cycle_cap=*/false, controller, nullptr);
}

}  // namespace gatsac::harness
