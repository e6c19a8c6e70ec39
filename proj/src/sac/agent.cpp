#include "gatsac/sac/agent.hpp"

#include <algorithm>
#include <cmath>

#include "gatsac/nn/checkpoint.hpp"

namespace gatsac::sac {

using nn::Tensor;
using nn::Vec;

double critic_target_value(double r, double done, double min_q_next, double logp_next,
                           double alpha, double gamma) {
  return r + gamma * (1.0 - done) * (min_q_next - alpha * logp_next);
}

double critic_loss_value(const Vec& q1, const Vec& q2, const Vec& y) {
  if (q1.size() != y.size() || q2.size() != y.size())
    throw ShapeError("critic_loss_value: size mismatch");
  double loss = 0.0;
  const double n = static_cast<double>(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double e1 = q1[i] - y[i];
    const double e2 = q2[i] - y[i];
    loss += (e1 * e1 + e2 * e2) / n;
  }
  return loss;
}

double actor_loss_value(const Vec& logp, const Vec& q1, const Vec& q2, double alpha) {
  if (q1.size() != logp.size() || q2.size() != logp.size())
    throw ShapeError("actor_loss_value: size mismatch");
  double loss = 0.0;
  const double n = static_cast<double>(logp.size());
  for (std::size_t i = 0; i < logp.size(); ++i)
    loss += (alpha * logp[i] - std::min(q1[i], q2[i])) / n;
  return loss;
}

double temperature_grad_log_alpha(const Vec& logp, double alpha, double target_entropy) {
  double mean_term = 0.0;
  for (double lp : logp) mean_term += (lp + target_entropy) / static_cast<double>(logp.size());
  return -alpha * mean_term;
}

void soft_update(nn::ParamStore& target, const nn::ParamStore& online, double tau) {
  auto& tp = target.params();
  const auto& op = online.params();
  if (tp.size() != op.size()) throw ShapeError("soft_update: store size mismatch");
  for (std::size_t i = 0; i < tp.size(); ++i) {
    if (!tp[i].value.same_shape(op[i].value))
      throw ShapeError("soft_update: shape mismatch at " + tp[i].name);
    auto& t = tp[i].value.data;
    const auto& o = op[i].value.data;
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = tau * o[k] + (1.0 - tau) * t[k];
  }
}

namespace {

gat::GatConfig gat_config(const sim::SimConfig& cfg) {
  gat::GatConfig g;
  g.hidden = cfg.sac.gat_hidden_dim;
  g.dropout = cfg.sac.gat_dropout;
  return g;
}

}  // namespace

SacAgent::SacAgent(const sim::SimConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      target_entropy_(cfg.sac.target_entropy * cfg.sac.entropy_multiplier),
      rng_(Rng(seed).fork(0x5ac)),
      encoder_(gat_config(cfg), Rng(seed).fork(0xe2c)),
      actor_(cfg.sac.gat_hidden_dim + sim::kSignalFeatureDim, cfg.sac.actor_hidden1,
             cfg.sac.actor_hidden2, ControlAction::total_dim(), rng_),
      q1_(critic_store_, "q1", cfg.sac.gat_hidden_dim + sim::kSignalFeatureDim,
          ControlAction::total_dim(), cfg.sac.actor_hidden1, cfg.sac.actor_hidden2, rng_),
      q2_(critic_store_, "q2", cfg.sac.gat_hidden_dim + sim::kSignalFeatureDim,
          ControlAction::total_dim(), cfg.sac.actor_hidden1, cfg.sac.actor_hidden2, rng_),
      t1_(target_store_, "q1", cfg.sac.gat_hidden_dim + sim::kSignalFeatureDim,
          ControlAction::total_dim(), cfg.sac.actor_hidden1, cfg.sac.actor_hidden2, rng_),
      t2_(target_store_, "q2", cfg.sac.gat_hidden_dim + sim::kSignalFeatureDim,
          ControlAction::total_dim(), cfg.sac.actor_hidden1, cfg.sac.actor_hidden2, rng_),
      buffer_(cfg.sac.buffer_capacity) {
  target_store_.copy_values_from(critic_store_);
  Tensor& la = alpha_store_.add("log_alpha", 1, 1);
  la.data[0] = std::log(cfg.sac.init_temperature);
  adam_.lr = cfg.sac.lr;
  adam_.grad_clip = cfg.sac.grad_clip;
  alpha_adam_ = adam_;
  alpha_adam_.lr = cfg.sac.alpha_lr;
}

double SacAgent::alpha() const {
  return std::exp(alpha_store_.value("log_alpha").data[0]);
}

Vec SacAgent::encode(const graph::TrafficGraph& g,
                     const std::array<double, sim::kSignalFeatureDim>& signal,
                     bool train_mode) {
  Vec z = encoder_.forward(g, nullptr, train_mode, train_mode ? &rng_ : nullptr).pooled;
  z.insert(z.end(), signal.begin(), signal.end());
  return z;
}

SacAgent::ActResult SacAgent::act(const graph::TrafficGraph& g,
                                  const std::array<double, sim::kSignalFeatureDim>& signal,
                                  ActMode mode, bool train_mode) {
  ActResult r;
  r.enc = encoder_.forward(g, nullptr, train_mode, train_mode ? &rng_ : nullptr);
  r.z = r.enc.pooled;
  r.z.insert(r.z.end(), signal.begin(), signal.end());

  const int d = ControlAction::total_dim();
  if (mode == ActMode::UniformRandom) {
    r.action.raw.resize(static_cast<std::size_t>(d));
    for (double& v : r.action.raw) v = rng_.uniform(-1.0, 1.0);
    return r;
  }

  Tensor Z(1, static_cast<int>(r.z.size()));
  for (std::size_t i = 0; i < r.z.size(); ++i) Z(0, static_cast<int>(i)) = r.z[i];
  GaussianActor::Cache c;
  actor_.forward(Z, c);
  actor_.sample(c, &rng_, mode == ActMode::Deterministic);
  r.action.raw.assign(c.a.data.begin(), c.a.data.end());
  if (mode == ActMode::Stochastic) r.log_prob = actor_.log_prob(c)[0];
  return r;
}

sim::SignalCommand SacAgent::command_from(const ActResult& r) const {
  sim::SignalCommand cmd = decode_action(r.action, cfg_);
  cmd.lane_types = gat::assign_lane_types(r.enc.lane_logits, r.action.lane().data());
  cmd.apply_lane_types = true;
  return cmd;
}

void SacAgent::observe(Vec z, Vec a, double scaled_reward, Vec z_next, double done) {
  if (static_cast<int>(z.size()) != obs_dim() || static_cast<int>(z_next.size()) != obs_dim())
    throw ShapeError("observe: embedding size " + std::to_string(z.size()) + " vs obs dim " +
                     std::to_string(obs_dim()));
  if (static_cast<int>(a.size()) != ControlAction::total_dim())
    throw ShapeError("observe: action size mismatch");
  Transition t;
  t.z = std::move(z);
  t.a = std::move(a);
  t.r = scaled_reward;
  t.z_next = std::move(z_next);
  t.done = done;
  buffer_.push(std::move(t));
}

SacAgent::UpdateStats SacAgent::update() {
  UpdateStats st;
  st.alpha = alpha();
  const int B = cfg_.sac.batch_size;
  if (buffer_.size() <= static_cast<std::size_t>(cfg_.sac.warmup_steps) ||
      buffer_.size() < static_cast<std::size_t>(B))
    return st;
  st.ran = true;

  const auto batch = buffer_.sample(B, rng_);
  const int zdim = obs_dim();
  const int adim = ControlAction::total_dim();
  Tensor Z(B, zdim), A(B, adim), Z2(B, zdim);
  Vec r(static_cast<std::size_t>(B)), done(static_cast<std::size_t>(B));
  for (int n = 0; n < B; ++n) {
    const Transition& t = *batch[static_cast<std::size_t>(n)];
    for (int i = 0; i < zdim; ++i) {
      Z(n, i) = t.z[static_cast<std::size_t>(i)];
      Z2(n, i) = t.z_next[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < adim; ++i) A(n, i) = t.a[static_cast<std::size_t>(i)];
    r[static_cast<std::size_t>(n)] = t.r;
    done[static_cast<std::size_t>(n)] = t.done;
  }

  const double cur_alpha = alpha();
  const double gamma = cfg_.sac.gamma;

  // targets: a' ~ pi(.|z'), y = r + gamma (1-d)(min Q_bar - alpha log pi)
  GaussianActor::Cache next_c;
  actor_.forward(Z2, next_c);
  actor_.sample(next_c, &rng_, /*deterministic=*/false);
  const Vec logp_next = actor_.log_prob(next_c);
  QCritic::Cache t1c, t2c;
  const Vec q1n = t1_.forward(Z2, next_c.a, t1c);
  const Vec q2n = t2_.forward(Z2, next_c.a, t2c);
  Vec y(static_cast<std::size_t>(B));
  for (int n = 0; n < B; ++n) {
    const std::size_t i = static_cast<std::size_t>(n);
    y[i] = critic_target_value(r[i], done[i], std::min(q1n[i], q2n[i]), logp_next[i],
                               cur_alpha, gamma);
  }

  // critic loss: sum over both critics of mean squared residual
  critic_store_.zero_grad();
  QCritic::Cache c1, c2;
  const Vec q1v = q1_.forward(Z, A, c1);
  const Vec q2v = q2_.forward(Z, A, c2);
  const double critic_loss = critic_loss_value(q1v, q2v, y);
  Vec g1(static_cast<std::size_t>(B)), g2(static_cast<std::size_t>(B));
  for (int n = 0; n < B; ++n) {
    const std::size_t i = static_cast<std::size_t>(n);
    g1[i] = 2.0 * (q1v[i] - y[i]) / B;
    g2[i] = 2.0 * (q2v[i] - y[i]) / B;
  }
  q1_.backward(c1, g1, nullptr, /*accumulate_params=*/true);
  q2_.backward(c2, g2, nullptr, /*accumulate_params=*/true);

  // actor loss: mean(alpha log pi - min Q), critics frozen
  actor_.params().zero_grad();
  GaussianActor::Cache pc;
  actor_.forward(Z, pc);
  actor_.sample(pc, &rng_, /*deterministic=*/false);
  const Vec logp = actor_.log_prob(pc);
  QCritic::Cache a1c, a2c;
  const Vec qa1 = q1_.forward(Z, pc.a, a1c);
  const Vec qa2 = q2_.forward(Z, pc.a, a2c);
  const double actor_loss = actor_loss_value(logp, qa1, qa2, cur_alpha);
  Vec gq1(static_cast<std::size_t>(B), 0.0), gq2(static_cast<std::size_t>(B), 0.0);
  Vec gLogp(static_cast<std::size_t>(B));
  for (int n = 0; n < B; ++n) {
    const std::size_t i = static_cast<std::size_t>(n);
    gLogp[i] = cur_alpha / B;
    (qa1[i] <= qa2[i] ? gq1 : gq2)[i] = -1.0 / B;
  }
  Tensor gA1, gA2;
  q1_.backward(a1c, gq1, &gA1, /*accumulate_params=*/false);
  q2_.backward(a2c, gq2, &gA2, /*accumulate_params=*/false);
  for (std::size_t i = 0; i < gA1.data.size(); ++i) gA1.data[i] += gA2.data[i];
  actor_.backward(pc, &gA1, &gLogp);

  // temperature: L = -E[alpha (log pi + H_target)], gradient wrt log alpha
  alpha_store_.zero_grad();
  const double alpha_grad = temperature_grad_log_alpha(logp, cur_alpha, target_entropy_);
  const double alpha_loss = alpha_grad;  // numerically identical at this point
  alpha_store_.grad("log_alpha").data[0] = alpha_grad;

  st.critic_loss = critic_loss;
  st.actor_loss = actor_loss;
  st.alpha_loss = alpha_loss;
  if (!std::isfinite(critic_loss) || !std::isfinite(actor_loss) || !std::isfinite(alpha_loss))
    return st;  // skipped, caller logs the incident

  const bool ok1 = nn::adam_update(critic_store_, adam_) == nn::AdamStatus::Applied;
  const bool ok2 = nn::adam_update(actor_.params(), adam_) == nn::AdamStatus::Applied;
  const bool ok3 = nn::adam_update(alpha_store_, alpha_adam_) == nn::AdamStatus::Applied;
  soft_update(target_store_, critic_store_, cfg_.sac.tau);
  st.applied = ok1 && ok2 && ok3;
  st.alpha = alpha();
  return st;
}

void SacAgent::save(const std::string& path) const {
  nn::save_checkpoint(path, {{"encoder", &encoder_.params()},
                             {"actor", &actor_.params()},
                             {"critic", &critic_store_},
                             {"target", &target_store_},
                             {"alpha", &alpha_store_}});
}

void SacAgent::load(const std::string& path) {
  nn::load_checkpoint(path, {{"encoder", &encoder_.params()},
                             {"actor", &actor_.params()},
                             {"critic", &critic_store_},
                             {"target", &target_store_},
                             {"alpha", &alpha_store_}});
}

}  // namespace gatsac::sac
