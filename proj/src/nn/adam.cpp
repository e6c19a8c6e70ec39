#include "gatsac/nn/adam.hpp"

#include <cmath>

namespace gatsac::nn {

AdamStatus adam_update(ParamStore& store, const AdamConfig& cfg) {
  if (!store.grads_finite()) return AdamStatus::SkippedNonFinite;

  double scale = 1.0;
  if (cfg.grad_clip > 0.0) {
    const double norm = store.grad_norm();
    if (norm > cfg.grad_clip) scale = cfg.grad_clip / norm;
  }

  store.adam_step += 1;
  const double t = static_cast<double>(store.adam_step);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);

  for (auto& p : store.params()) {
    const std::size_t n = p.value.data.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double g = p.grad.data[i] * scale;
      p.m.data[i] = cfg.beta1 * p.m.data[i] + (1.0 - cfg.beta1) * g;
      p.v.data[i] = cfg.beta2 * p.v.data[i] + (1.0 - cfg.beta2) * g * g;
      const double mhat = p.m.data[i] / bc1;
      const double vhat = p.v.data[i] / bc2;
      p.value.data[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
  }
  return AdamStatus::Applied;
}

}  // namespace gatsac::nn
