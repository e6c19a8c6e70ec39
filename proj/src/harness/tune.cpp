#include "gatsac/harness/tune.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <ostream>

#include "gatsac/core/csv.hpp"
#include "gatsac/core/stats.hpp"

namespace gatsac::harness {
namespace {

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

template <std::size_t N>
int categorical(Rng& rng, const int (&choices)[N]) {
  return choices[rng.uniform_index(N)];
}

double window_mean(const std::deque<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace

SampledParams sample_params(Rng& rng) {
  SampledParams p;
  p.lr = log_uniform(rng, 1e-5, 1e-3);
  p.tau = log_uniform(rng, 0.001, 0.02);
  p.gamma = rng.uniform(0.90, 0.995);
  p.batch_size = categorical(rng, {32, 64, 128, 256});
  p.init_temperature = rng.uniform(0.05, 0.5);
  p.entropy_multiplier = rng.uniform(0.3, 1.0);
  p.gat_hidden_dim = categorical(rng, {64, 128, 256});
  p.gat_dropout = rng.uniform(0.1, 0.5);
  p.grad_clip = rng.uniform(0.5, 2.0);
  p.w_d = rng.uniform(0.5, 2.0);
  p.w_f = rng.uniform(0.1, 1.0);
  p.w_s = rng.uniform(1.0, 3.0);
  return p;
}

void apply_params(sim::SimConfig& cfg, const SampledParams& p) {
  cfg.sac.lr = p.lr;
  cfg.sac.tau = p.tau;
  cfg.sac.gamma = p.gamma;
  cfg.sac.batch_size = p.batch_size;
  cfg.sac.init_temperature = p.init_temperature;
  cfg.sac.entropy_multiplier = p.entropy_multiplier;
  cfg.sac.gat_hidden_dim = p.gat_hidden_dim;
  cfg.sac.gat_dropout = p.gat_dropout;
  cfg.sac.grad_clip = p.grad_clip;
  cfg.weights.w_d = p.w_d;
  cfg.weights.w_f = p.w_f;
  cfg.weights.w_s = p.w_s;
}

double normalized_reward(const sac::EpisodeRow& row, const sim::SimConfig& cfg) {
  const double steps = std::max(1.0, std::round(cfg.episode_length / cfg.dt));
  return row.reward / steps;
}

TuneResult run_tune(const sim::SimConfig& base, const TuneSpec& spec, const std::string& out_dir,
                    std::ostream* progress) {
  ensure_dir(out_dir);
  TuneResult res;
  res.log_csv = out_dir + "/trials.csv";
  res.best_overlay_path = out_dir + "/best_params.cfg";
  write_manifest(out_dir + "/manifest.txt", base,
                 {"command=tune", "trials=" + std::to_string(spec.trials),
                  "episodes_per_trial=" + std::to_string(spec.episodes_per_trial),
                  "prune_episode=" + std::to_string(spec.prune_episode),
                  "objective_window=" + std::to_string(spec.objective_window),
                  "objective=mean normalized reward over last window + 0.01 * mean throughput"});

  CsvWriter log(res.log_csv,
                {"trial", "status", "episodes_run", "intermediate", "objective", "lr", "tau",
                 "gamma", "batch_size", "init_temperature", "entropy_multiplier",
                 "gat_hidden_dim", "gat_dropout", "grad_clip", "w_d", "w_f", "w_s"});

  Rng sampler = Rng(spec.seed).fork(0x7041);
  std::vector<double> prior_intermediates;  // value at prune_episode, completed or not

  for (int trial = 0; trial < spec.trials; ++trial) {
    SampledParams p = sample_params(sampler);
    sim::SimConfig cfg = base;
    apply_params(cfg, p);
    cfg.rng_seed = Rng(spec.seed).fork(static_cast<std::uint64_t>(trial) + 100).seed();
    if (auto it = spec.injected.find(trial); it != spec.injected.end()) {
      for (const auto& [key, value] : it->second) sim::apply_override(cfg, key, value);
      p.lr = cfg.sac.lr;  // keep the log faithful to what actually ran
      p.tau = cfg.sac.tau;
      p.gamma = cfg.sac.gamma;
      p.batch_size = cfg.sac.batch_size;
      p.init_temperature = cfg.sac.init_temperature;
      p.entropy_multiplier = cfg.sac.entropy_multiplier;
      p.gat_hidden_dim = cfg.sac.gat_hidden_dim;
      p.gat_dropout = cfg.sac.gat_dropout;
      p.grad_clip = cfg.sac.grad_clip;
      p.w_d = cfg.weights.w_d;
      p.w_f = cfg.weights.w_f;
      p.w_s = cfg.weights.w_s;
    }
    cfg.validate();

    env::TrafficEnv env(cfg);
    sac::SacAgent agent(cfg, cfg.rng_seed);

    std::deque<double> reward_window;    // trailing normalized rewards
    std::deque<double> throughput_window;
    double intermediate = 0.0;
    bool pruned = false;

    sac::TrainOptions opts;
    opts.on_episode = [&](const sac::EpisodeRow& row) {
      reward_window.push_back(normalized_reward(row, cfg));
      throughput_window.push_back(static_cast<double>(row.throughput));
      while (static_cast<int>(reward_window.size()) > spec.objective_window) {
        reward_window.pop_front();
        throughput_window.pop_front();
      }
    };
    opts.should_stop = [&](const sac::EpisodeRow& row) {
      if (row.episode + 1 != spec.prune_episode) return false;
      intermediate = window_mean(reward_window);
      if (prior_intermediates.empty()) return false;
      const double med = median(prior_intermediates);
      pruned = intermediate < med;
      return pruned;
    };

    const auto rows = sac::train_agent(env, agent, spec.episodes_per_trial, opts);
    if (static_cast<int>(rows.size()) < spec.prune_episode)
      intermediate = window_mean(reward_window);  // trial shorter than the check
    prior_intermediates.push_back(intermediate);

    TrialRow tr;
    tr.trial = trial;
    tr.pruned = pruned;
    tr.episodes_run = static_cast<int>(rows.size());
    tr.intermediate = intermediate;
    tr.params = p;
    if (!pruned) {
      tr.objective = window_mean(reward_window) + 0.01 * window_mean(throughput_window);
      if (res.best_trial < 0 || tr.objective > res.best_objective) {
        res.best_trial = trial;
        res.best_objective = tr.objective;
        std::ofstream best(res.best_overlay_path);
        best << "# tune overlay: best trial " << trial << " objective "
             << format_double(tr.objective) << "\n";
        best << "lr=" << format_double_exact(p.lr) << "\n";
        best << "tau=" << format_double_exact(p.tau) << "\n";
        best << "gamma=" << format_double_exact(p.gamma) << "\n";
        best << "batch_size=" << p.batch_size << "\n";
        best << "init_temperature=" << format_double_exact(p.init_temperature) << "\n";
        best << "entropy_multiplier=" << format_double_exact(p.entropy_multiplier) << "\n";
        best << "gat_hidden_dim=" << p.gat_hidden_dim << "\n";
        best << "gat_dropout=" << format_double_exact(p.gat_dropout) << "\n";
        best << "grad_clip=" << format_double_exact(p.grad_clip) << "\n";
        best << "w_d=" << format_double_exact(p.w_d) << "\n";
        best << "w_f=" << format_double_exact(p.w_f) << "\n";
        best << "w_s=" << format_double_exact(p.w_s) << "\n";
      }
    }
    res.rows.push_back(tr);
    log.row({std::to_string(trial), pruned ? "pruned" : "complete",
             std::to_string(tr.episodes_run), format_double(tr.intermediate),
             format_double(tr.objective), format_double(p.lr), format_double(p.tau),
             format_double(p.gamma), std::to_string(p.batch_size),
             format_double(p.init_temperature), format_double(p.entropy_multiplier),
             std::to_string(p.gat_hidden_dim), format_double(p.gat_dropout),
             format_double(p.grad_clip), format_double(p.w_d), format_double(p.w_f),
             format_double(p.w_s)});
    log.flush();
    if (progress)
      *progress << "trial " << trial << (pruned ? " pruned" : " complete") << " intermediate "
                << tr.intermediate << " objective " << tr.objective << "\n";
  }
  return res;
}

}  // namespace gatsac::harness
