#pragma once

#include "gatsac/nn/param_store.hpp"

namespace gatsac::nn {

struct AdamConfig {
  double lr = 3e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double grad_clip = 1.0;  // global norm over the store; <=0 disables
};

enum class AdamStatus { Applied, SkippedNonFinite };

// Global-norm clip, then bias-corrected Adam over every parameter in the
// store. A non-finite gradient anywhere leaves the store untouched.
AdamStatus adam_update(ParamStore& store, const AdamConfig& cfg);

}  // namespace gatsac::nn
