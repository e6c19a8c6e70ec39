#include "gatsac/sac/replay.hpp"

#include "gatsac/core/error.hpp"

namespace gatsac::sac {

ReplayBuffer::ReplayBuffer(int capacity) : capacity_(capacity) {
  if (capacity <= 0) throw ConfigError("field buffer_capacity: must be positive");
  ring_.resize(static_cast<std::size_t>(capacity));
}

void ReplayBuffer::push(Transition t) {
  ring_[head_] = std::move(t);
  head_ = (head_ + 1) % static_cast<std::size_t>(capacity_);
  if (size_ < static_cast<std::size_t>(capacity_)) ++size_;
}

const Transition& ReplayBuffer::at(std::size_t logical) const {
  if (logical >= size_) throw ShapeError("replay index out of range");
  const std::size_t cap = static_cast<std::size_t>(capacity_);
  const std::size_t oldest = (head_ + cap - size_) % cap;
  return ring_[(oldest + logical) % cap];
}

std::vector<const Transition*> ReplayBuffer::sample(int batch, Rng& rng) const {
  if (batch <= 0 || static_cast<std::size_t>(batch) > size_)
    throw ShapeError("replay sample: batch " + std::to_string(batch) + " vs size " +
                     std::to_string(size_));
  // Floyd's algorithm: without replacement in O(batch)
  std::unordered_set<std::size_t> chosen;
  std::vector<const Transition*> out;
  out.reserve(static_cast<std::size_t>(batch));
  const std::size_t n = size_;
  for (std::size_t i = n - static_cast<std::size_t>(batch); i < n; ++i) {
    std::size_t j = rng.uniform_index(i + 1);
    if (!chosen.insert(j).second) {
      chosen.insert(i);
      j = i;
    }
    out.push_back(&at(j));
  }
  return out;
}

}  // namespace gatsac::sac
