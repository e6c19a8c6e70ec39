#pragma once

#include <string>

#include "gatsac/gat/encoder.hpp"
#include "gatsac/sac/action.hpp"
#include "gatsac/sac/networks.hpp"
#include "gatsac/sac/replay.hpp"
#include "gatsac/sim/signal.hpp"

namespace gatsac::sac {

// y = r + gamma (1-d) [min_i Q_target_i(z', a') - alpha log pi(a'|z')]
double critic_target_value(double r, double done, double min_q_next, double logp_next,
                           double alpha, double gamma);

// Sum over both critics of the mean squared Bellman residual.
double critic_loss_value(const nn::Vec& q1, const nn::Vec& q2, const nn::Vec& y);

// mean(alpha * log pi - min_i Q_i)
double actor_loss_value(const nn::Vec& logp, const nn::Vec& q1, const nn::Vec& q2, double alpha);

// d/dlog(alpha) of L_alpha = -E[alpha (log pi + H_target)]; zero exactly at
// E[log pi] = -H_target.
double temperature_grad_log_alpha(const nn::Vec& logp, double alpha, double target_entropy);

// target <- tau * online + (1-tau) * target, elementwise over matching stores.
void soft_update(nn::ParamStore& target, const nn::ParamStore& online, double tau);

enum class ActMode { Stochastic, Deterministic, UniformRandom };

// GAT-SAC learner: fixed attention encoder, squashed-Gaussian actor, twin
// critics with Polyak targets and auto-tuned temperature. Per Algorithm-1
// semantics the replay buffer stores embeddings, so SAC losses update the
// actor/critics/temperature only.
class SacAgent {
 public:
  SacAgent(const sim::SimConfig& cfg, std::uint64_t seed);

  struct ActResult {
    ControlAction action;
    double log_prob = 0.0;
    nn::Vec z;                     // policy observation: [pooled ; signal]
    gat::GatEncoder::Output enc;   // node embeddings + lane logits
  };

  // The policy observes the pooled graph embedding next to the signal state.
  ActResult act(const graph::TrafficGraph& g,
                const std::array<double, sim::kSignalFeatureDim>& signal, ActMode mode,
                bool train_mode);

  // Decoded command incl. channelization from the lane head + a_lane.
  sim::SignalCommand command_from(const ActResult& r) const;

  // Observation without action sampling (z' for the next transition).
  nn::Vec encode(const graph::TrafficGraph& g,
                 const std::array<double, sim::kSignalFeatureDim>& signal, bool train_mode);

  int obs_dim() const { return cfg_.sac.gat_hidden_dim + sim::kSignalFeatureDim; }

  void observe(nn::Vec z, nn::Vec a, double scaled_reward, nn::Vec z_next, double done);

  struct UpdateStats {
    bool ran = false;      // past warmup and enough samples
    bool applied = false;  // losses finite, optimizers stepped
    double critic_loss = 0.0;
    double actor_loss = 0.0;
    double alpha_loss = 0.0;
    double alpha = 0.0;
  };
  // One critic + one actor + one temperature + one soft update.
  UpdateStats update();

  double alpha() const;
  double target_entropy() const { return target_entropy_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  gat::GatEncoder& encoder() { return encoder_; }
  GaussianActor& actor() { return actor_; }
  nn::ParamStore& critic_params() { return critic_store_; }
  nn::ParamStore& target_params() { return target_store_; }
  nn::ParamStore& alpha_params() { return alpha_store_; }
  QCritic& q1() { return q1_; }
  QCritic& q2() { return q2_; }
  Rng& rng() { return rng_; }

  void save(const std::string& path) const;
  void load(const std::string& path);

 private:
  sim::SimConfig cfg_;
  double target_entropy_;
  Rng rng_;
  gat::GatEncoder encoder_;
  GaussianActor actor_;
  nn::ParamStore critic_store_;
  nn::ParamStore target_store_;
  QCritic q1_, q2_, t1_, t2_;
  nn::ParamStore alpha_store_;
  ReplayBuffer buffer_;
  nn::AdamConfig adam_;
  nn::AdamConfig alpha_adam_;
};

}  // namespace gatsac::sac
