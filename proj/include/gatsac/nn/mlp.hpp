#pragma once

#include <string>
#include <vector>

#include "gatsac/nn/ops.hpp"
#include "gatsac/nn/param_store.hpp"

namespace gatsac::nn {

// Stack of dense layers with ELU after every layer, operating on batches.
// Parameters are registered into the owning store as <prefix>.W<k>/<prefix>.b<k>.
class MlpTrunk {
 public:
  MlpTrunk(ParamStore& store, std::string prefix, std::vector<int> dims, Rng& rng);

  struct Cache {
    Tensor input;
    std::vector<Tensor> pre;  // pre-activation per layer
    std::vector<Tensor> act;  // post-ELU per layer
  };

  const Tensor& forward(const Tensor& X, Cache& cache) const;
  // Backpropagates gOut (grad wrt trunk output). When accumulate_params is
  // false the weights are treated as frozen (only gX is produced).
  void backward(const Cache& cache, const Tensor& gOut, Tensor* gX,
                bool accumulate_params) const;

  int in_dim() const { return dims_.front(); }
  int out_dim() const { return dims_.back(); }

 private:
  ParamStore* store_;
  std::string prefix_;
  std::vector<int> dims_;  // dims_[0] = input, rest are layer widths
};

}  // namespace gatsac::nn
