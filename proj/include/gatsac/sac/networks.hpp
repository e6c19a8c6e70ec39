#pragma once

#include <string>

#include "gatsac/nn/mlp.hpp"

namespace gatsac::sac {

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;
inline constexpr double kSquashEps = 1e-6;

// Squashed-Gaussian policy head over the pooled embedding. Sampling is
// reparameterized (a = tanh(mu + sigma * xi)); the backward treats the cached
// noise as a constant, which is exactly the gradient SAC's actor loss needs.
class GaussianActor {
 public:
  GaussianActor(int in_dim, int hidden1, int hidden2, int action_dim, Rng& rng);

  struct Cache {
    nn::MlpTrunk::Cache trunk;
    nn::Tensor mu;           // B x d
    nn::Tensor log_std_pre;  // before clamping
    nn::Tensor log_std;      // clamped
    nn::Tensor xi;           // noise actually used
    nn::Tensor a;            // squashed action
  };

  void forward(const nn::Tensor& Z, Cache& c) const;
  // Fills xi and a; deterministic mode uses xi = 0.
  void sample(Cache& c, Rng* rng, bool deterministic) const;
  // Reparameterized squash with externally fixed noise (tests, replays).
  void sample_with(Cache& c, const nn::Tensor& xi) const;
  // log pi(a|z) per sample, including the tanh change-of-variables correction.
  nn::Vec log_prob(const Cache& c) const;

  // gA: dL/da (B x d) or null; gLogp: dL/dlogpi (B) or null.
  void backward(const Cache& c, const nn::Tensor* gA, const nn::Vec* gLogp);

  int action_dim() const { return action_dim_; }
  int in_dim() const { return trunk_.in_dim(); }
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }

 private:
  int action_dim_;
  nn::ParamStore params_;
  nn::MlpTrunk trunk_;
};

// Q(z, a) network; twin critics are two instances with distinct prefixes over
// a shared store so one loss/one clip covers both.
class QCritic {
 public:
  QCritic(nn::ParamStore& store, std::string prefix, int z_dim, int action_dim, int hidden1,
          int hidden2, Rng& rng);

  struct Cache {
    nn::Tensor input;  // B x (z_dim + action_dim)
    nn::MlpTrunk::Cache trunk;
  };

  nn::Vec forward(const nn::Tensor& Z, const nn::Tensor& A, Cache& c) const;
  // gQ: dL/dq per sample. gA, when non-null, receives dL/da (B x action_dim);
  // accumulate_params=false treats the critic as frozen.
  void backward(const Cache& c, const nn::Vec& gQ, nn::Tensor* gA, bool accumulate_params);

 private:
  std::string prefix_;
  nn::ParamStore* store_;
  int z_dim_;
  int action_dim_;
  nn::MlpTrunk trunk_;
};

}  // namespace gatsac::sac
