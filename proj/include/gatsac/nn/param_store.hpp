#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "gatsac/core/rng.hpp"
#include "gatsac/nn/tensor.hpp"

namespace gatsac::nn {

// One learnable tensor with its gradient accumulator and Adam moments.
struct Param {
  std::string name;
  Tensor value;
  Tensor grad;
  Tensor m;
  Tensor v;
};

// Ordered, named parameter collection. Iteration order is insertion order so
// global-norm clipping and checkpoints are deterministic.
class ParamStore {
 public:
  Tensor& add(const std::string& name, int rows, int cols);
  bool has(const std::string& name) const { return index_.count(name) > 0; }
  Param& param(const std::string& name);
  const Param& param(const std::string& name) const;
  Tensor& value(const std::string& name) { return param(name).value; }
  const Tensor& value(const std::string& name) const { return param(name).value; }
  Tensor& grad(const std::string& name) { return param(name).grad; }

  std::vector<Param>& params() { return params_; }
  const std::vector<Param>& params() const { return params_; }

  void zero_grad();
  double grad_norm() const;
  bool grads_finite() const;
  bool values_finite() const;
  std::size_t value_count() const;

  // Copies values (shapes must match) — used for target-network initialisation.
  void copy_values_from(const ParamStore& other);

  // Order-insensitive content hash of the values; test hook for "parameters
  // did not move".
  std::uint64_t value_hash() const;

  std::int64_t adam_step = 0;

 private:
  std::vector<Param> params_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Fills with N(0, stddev) entries from rng.
void fill_normal(Tensor& t, Rng& rng, double stddev);
// Glorot-style scaling for a rows x cols transform.
void init_xavier(Tensor& t, Rng& rng);

}  // namespace gatsac::nn
