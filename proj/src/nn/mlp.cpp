#include "gatsac/nn/mlp.hpp"

namespace gatsac::nn {

MlpTrunk::MlpTrunk(ParamStore& store, std::string prefix, std::vector<int> dims, Rng& rng)
    : store_(&store), prefix_(std::move(prefix)), dims_(std::move(dims)) {
  if (dims_.size() < 2) throw ShapeError("MlpTrunk needs at least one layer");
  for (std::size_t k = 0; k + 1 < dims_.size(); ++k) {
    Tensor& W = store.add(prefix_ + ".W" + std::to_string(k), dims_[k + 1], dims_[k]);
    init_xavier(W, rng);
    store.add(prefix_ + ".b" + std::to_string(k), dims_[k + 1], 1);
  }
}

const Tensor& MlpTrunk::forward(const Tensor& X, Cache& cache) const {
  const std::size_t layers = dims_.size() - 1;
  cache.input = X;
  cache.pre.assign(layers, Tensor());
  cache.act.assign(layers, Tensor());
  const Tensor* in = &cache.input;
  for (std::size_t k = 0; k < layers; ++k) {
    const Tensor& W = store_->value(prefix_ + ".W" + std::to_string(k));
    const Tensor& b = store_->value(prefix_ + ".b" + std::to_string(k));
    dense_forward_batch(W, b.data, *in, cache.pre[k]);
    cache.act[k] = cache.pre[k];
    for (double& u : cache.act[k].data) u = elu(u);
    in = &cache.act[k];
  }
  return cache.act.back();
}

void MlpTrunk::backward(const Cache& cache, const Tensor& gOut, Tensor* gX,
                        bool accumulate_params) const {
  const std::size_t layers = dims_.size() - 1;
  Tensor g = gOut;
  for (std::size_t k = layers; k-- > 0;) {
    // through ELU
    for (std::size_t i = 0; i < g.data.size(); ++i)
      g.data[i] *= elu_grad(cache.pre[k].data[i]);
    const Tensor& W = store_->value(prefix_ + ".W" + std::to_string(k));
    const Tensor& input = (k == 0) ? cache.input : cache.act[k - 1];
    const bool need_gx = (k > 0) || (gX != nullptr);
    Tensor gin;
    Tensor* gWp = nullptr;
    Vec* gbp = nullptr;
    if (accumulate_params) {
      gWp = &store_->grad(prefix_ + ".W" + std::to_string(k));
      gbp = &store_->grad(prefix_ + ".b" + std::to_string(k)).data;
    }
    dense_backward_batch(W, input, g, gWp, gbp, need_gx ? &gin : nullptr);
    if (k == 0) {
      if (gX) *gX = std::move(gin);
    } else {
      g = std::move(gin);
    }
  }
}

}  // namespace gatsac::nn
