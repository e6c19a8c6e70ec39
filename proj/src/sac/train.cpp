#include "gatsac/sac/train.hpp"

#include <cmath>
#include <ostream>

#include "gatsac/core/error.hpp"

namespace gatsac::sac {

std::vector<EpisodeRow> train_agent(env::TrafficEnv& env, SacAgent& agent, int episodes,
                                    const TrainOptions& opts) {
  std::vector<EpisodeRow> rows;
  rows.reserve(static_cast<std::size_t>(episodes));
  const sim::SimConfig& cfg = env.config();
  const Rng seed_root(cfg.rng_seed);
  int consecutive_skips = 0;

  for (int ep = 0; ep < episodes; ++ep) {
    const std::uint64_t ep_seed = seed_root.fork(static_cast<std::uint64_t>(ep) + 1).seed();
    const graph::TrafficGraph* g = &env.reset(ep_seed);

    double critic_loss_sum = 0.0, actor_loss_sum = 0.0;
    int updates = 0;

    while (!env.done()) {
      const bool warm = agent.buffer().size() <
                        static_cast<std::size_t>(env.config().sac.warmup_steps);
      SacAgent::ActResult ar =
          agent.act(*g, sim::signal_features(env.state().signal),
                    warm ? ActMode::UniformRandom : ActMode::Stochastic,
                    /*train_mode=*/true);
      const sim::SignalCommand cmd = agent.command_from(ar);

      env::TrafficEnv::StepInfo info;
      g = &env.step(cmd, info);
      const nn::Vec z_next =
          agent.encode(*g, sim::signal_features(env.state().signal), /*train_mode=*/true);
      agent.observe(std::move(ar.z), std::move(ar.action.raw),
                    info.reward * cfg.sac.reward_scale, z_next, info.done ? 1.0 : 0.0);

      const SacAgent::UpdateStats st = agent.update();
      if (st.ran) {
        if (st.applied) {
          consecutive_skips = 0;
          critic_loss_sum += st.critic_loss;
          actor_loss_sum += st.actor_loss;
          ++updates;
        } else {
          ++consecutive_skips;
          if (opts.progress)
            *opts.progress << "episode " << ep << " t=" << env.time()
                           << ": non-finite loss, update skipped (" << consecutive_skips
                           << ")\n";
          if (consecutive_skips >= opts.max_consecutive_skips)
            throw TrainError("aborting: " + std::to_string(consecutive_skips) +
                             " consecutive non-finite updates (episode " + std::to_string(ep) +
                             ", t=" + std::to_string(env.time()) +
                             ", alpha=" + std::to_string(st.alpha) + ")");
        }
      }
    }

    const env::TrafficEnv::EpisodeSummary s = env.summary();
    EpisodeRow row;
    row.episode = ep;
    row.reward = s.reward_sum;
    row.throughput = s.departed;
    row.avg_delay = s.avg_delay;
    row.violations = s.events;
    row.critic_loss = updates > 0 ? critic_loss_sum / updates : 0.0;
    row.actor_loss = updates > 0 ? actor_loss_sum / updates : 0.0;
    row.alpha = agent.alpha();
    rows.push_back(row);
    if (opts.on_episode) opts.on_episode(row);
    if (opts.progress)
      *opts.progress << "episode " << ep << ": reward " << row.reward << " delay "
                     << row.avg_delay << " throughput " << row.throughput << " alpha "
                     << row.alpha << "\n";
    if (opts.should_stop && opts.should_stop(row)) break;
  }
  return rows;
}

}  // namespace gatsac::sac
