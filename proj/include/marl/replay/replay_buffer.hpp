#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "marl/common/rng.hpp"
#include "marl/nn/matrix.hpp"

namespace marl::replay {

struct TransitionLayout {
  std::size_t state_dim = 0;
  std::vector<std::size_t> obs_dims;  // one per agent
  std::size_t action_dim = 2;

  std::size_t agents() const { return obs_dims.size(); }
  std::size_t row_size() const;
};

// (s, o_1..o_N, a_1..a_N, r_1..r_N, s', o'_1..o'_N)
struct Transition {
  std::vector<double> state;
  std::vector<std::vector<double>> obs;
  std::vector<std::vector<double>> actions;
  std::vector<double> rewards;
  std::vector<double> next_state;
  std::vector<std::vector<double>> next_obs;

  friend bool operator==(const Transition&, const Transition&) = default;
};

// Column-oriented view of B sampled transitions; row j of every matrix
// belongs to sample j.
struct TransitionBatch {
  nn::Matrix state;                   // B x |s|
  std::vector<nn::Matrix> obs;        // per agent, B x |o_i|
  std::vector<nn::Matrix> actions;    // per agent, B x |a|
  nn::Matrix rewards;                 // B x N
  nn::Matrix next_state;              // B x |s|
  std::vector<nn::Matrix> next_obs;   // per agent, B x |o_i|

  std::size_t size() const { return state.rows(); }
  Transition at(std::size_t j) const;
};

// Bounded FIFO store. Once full, each insert overwrites the oldest entry.
class ReplayBuffer {
 public:
  ReplayBuffer(TransitionLayout layout, std::size_t capacity);

  void store(const Transition& t);

  // B uniform draws with replacement.
  TransitionBatch sample(std::size_t batch_size, Rng& rng) const;
  // Gathers the given slots (0 = oldest) into a batch.
  TransitionBatch gather(const std::vector<std::size_t>& indices) const;

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t inserted() const { return inserted_; }
  const TransitionLayout& layout() const { return layout_; }

  // i-th stored transition counted from the oldest.
  Transition at(std::size_t i) const;

 private:
  std::size_t slot_of(std::size_t i) const;
  const double* row(std::size_t slot) const { return storage_.data() + slot * row_size_; }

  TransitionLayout layout_;
  std::size_t capacity_;
  std::size_t row_size_;
  std::vector<double> storage_;  // grows until capacity rows are allocated
  std::size_t head_ = 0;         // next slot to write
  std::size_t size_ = 0;
  std::uint64_t inserted_ = 0;
};

}  // namespace marl::replay
