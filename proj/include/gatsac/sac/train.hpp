#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "gatsac/env/traffic_env.hpp"
#include "gatsac/sac/agent.hpp"

namespace gatsac::sac {

struct EpisodeRow {
  int episode = 0;
  double reward = 0.0;  // episode sum of per-substep rewards, unscaled
  int throughput = 0;
  double avg_delay = 0.0;
  long violations = 0;
  double critic_loss = 0.0;  // episode mean over applied updates
  double actor_loss = 0.0;
  double alpha = 0.0;
};

struct TrainOptions {
  std::ostream* progress = nullptr;         // one line per episode when set
  std::function<void(const EpisodeRow&)> on_episode;
  std::function<bool(const EpisodeRow&)> should_stop;  // early termination (pruning)
  int max_consecutive_skips = 3;            // non-finite loss guard
};

// Algorithm-1 loop: encode, act (uniform random during warmup), step the env,
// store (z, a, r, z', d) and run one critic/actor/temperature/soft update per
// environment step once the buffer has more than warmup_steps transitions.
// Throws TrainError after max_consecutive_skips non-finite updates in a row.
std::vector<EpisodeRow> train_agent(env::TrafficEnv& env, SacAgent& agent, int episodes,
                                    const TrainOptions& opts = {});

}  // namespace gatsac::sac
