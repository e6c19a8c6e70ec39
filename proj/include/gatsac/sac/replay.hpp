#pragma once

#include <unordered_set>
#include <vector>

#include "gatsac/core/rng.hpp"
#include "gatsac/nn/tensor.hpp"

namespace gatsac::sac {

struct Transition {
  nn::Vec z;
  nn::Vec a;
  double r = 0.0;
  nn::Vec z_next;
  double done = 0.0;
};

// FIFO ring with uniform without-replacement batch sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(int capacity);

  void push(Transition t);
  std::size_t size() const { return size_; }
  int capacity() const { return capacity_; }

  // logical index 0 is the oldest element
  const Transition& at(std::size_t logical) const;

  std::vector<const Transition*> sample(int batch, Rng& rng) const;

 private:
  int capacity_;
  std::vector<Transition> ring_;
  std::size_t head_ = 0;  // next write slot
  std::size_t size_ = 0;
};

}  // namespace gatsac::sac
