#include "gatsac/nn/param_store.hpp"

#include <cmath>
#include <cstring>

namespace gatsac::nn {

Tensor& ParamStore::add(const std::string& name, int rows, int cols) {
  if (has(name)) throw ShapeError("parameter already registered: " + name);
  Param p;
  p.name = name;
  p.value = Tensor(rows, cols);
  p.grad = Tensor(rows, cols);
  p.m = Tensor(rows, cols);
  p.v = Tensor(rows, cols);
  params_.push_back(std::move(p));
  index_[name] = params_.size() - 1;
  return params_.back().value;
}

Param& ParamStore::param(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw ShapeError("unknown parameter: " + name);
  return params_[it->second];
}

const Param& ParamStore::param(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ShapeError("unknown parameter: " + name);
  return params_[it->second];
}

void ParamStore::zero_grad() {
  for (auto& p : params_) p.grad.zero();
}

double ParamStore::grad_norm() const {
  double ss = 0.0;
  for (const auto& p : params_)
    for (double g : p.grad.data) ss += g * g;
  return std::sqrt(ss);
}

bool ParamStore::grads_finite() const {
  for (const auto& p : params_)
    if (!p.grad.finite()) return false;
  return true;
}

bool ParamStore::values_finite() const {
  for (const auto& p : params_)
    if (!p.value.finite()) return false;
  return true;
}

std::size_t ParamStore::value_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.value.data.size();
  return n;
}

void ParamStore::copy_values_from(const ParamStore& other) {
  if (other.params_.size() != params_.size())
    throw ShapeError("copy_values_from: parameter count mismatch");
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (!params_[i].value.same_shape(other.params_[i].value))
      throw ShapeError("copy_values_from: shape mismatch at " + params_[i].name);
    params_[i].value.data = other.params_[i].value.data;
  }
}

std::uint64_t ParamStore::value_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& p : params_) {
    for (double d : p.value.data) {
      std::uint64_t bits;
      std::memcpy(&bits, &d, sizeof(bits));
      h ^= bits;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

void fill_normal(Tensor& t, Rng& rng, double stddev) {
  for (double& v : t.data) v = rng.normal(0.0, stddev);
}

void init_xavier(Tensor& t, Rng& rng) {
  const double stddev = std::sqrt(2.0 / static_cast<double>(t.rows + t.cols));
  fill_normal(t, rng, stddev);
}

}  // namespace gatsac::nn
