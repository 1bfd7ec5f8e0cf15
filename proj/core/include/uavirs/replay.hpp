#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "uavirs/rng.hpp"

namespace uavirs {

struct Transition {
  std::vector<double> obs;
  std::vector<double> action;  // table index (single entry) or raw actor output
  double reward = 0.0;
  std::vector<double> next_obs;
  bool terminal = false;
};

// Fixed-capacity ring of transitions; once full, the oldest entry is
// overwritten first. Sampling is uniform with replacement.
class ReplayMemory {
 public:
  explicit ReplayMemory(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("ReplayMemory: zero capacity");
  }

  void push(Transition t) {
    if (ring_.size() < capacity_) {
      ring_.push_back(std::move(t));
      cursor_ = ring_.size() % capacity_;
    } else {
      ring_[cursor_] = std::move(t);
      cursor_ = (cursor_ + 1) % capacity_;
    }
  }

  std::size_t size() const { return ring_.size(); }
  std::size_t capacity() const { return capacity_; }

  // i = 0 is the most recently pushed transition.
  const Transition& nth_newest(std::size_t i) const {
    if (i >= ring_.size()) throw std::out_of_range("ReplayMemory: index past size");
    const std::size_t newest = (cursor_ + capacity_ - 1) % capacity_;
    return ring_[(newest + capacity_ - i) % capacity_];
  }

  std::vector<Transition> sample(std::size_t count, Rng& rng) const {
    if (ring_.size() < count) {
      throw std::logic_error("ReplayMemory: fewer transitions than requested");
    }
    std::uniform_int_distribution<std::size_t> pick(0, ring_.size() - 1);
    std::vector<Transition> batch;
    batch.reserve(count);
    for (std::size_t i = 0; i < count; ++i) batch.push_back(ring_[pick(rng)]);
    return batch;
  }

 private:
  std::size_t capacity_;
  std::vector<Transition> ring_;
  std::size_t cursor_ = 0;
};

}  // namespace uavirs
