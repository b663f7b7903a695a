#include "marl/replay/replay_buffer.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "marl/common/errors.hpp"

namespace marl::replay {
namespace {

void require(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw UsageError(std::string("replay store: ") + what + " has size " + std::to_string(got) +
                     ", expected " + std::to_string(want));
  }
}

double* put(double* dst, const std::vector<double>& v) {
  std::memcpy(dst, v.data(), v.size() * sizeof(double));
  return dst + v.size();
}

}  // namespace

std::size_t TransitionLayout::row_size() const {
  std::size_t obs = 0;
  for (std::size_t d : obs_dims) obs += d;
  return 2 * state_dim + 2 * obs + agents() * action_dim + agents();
}

ReplayBuffer::ReplayBuffer(TransitionLayout layout, std::size_t capacity)
    : layout_(std::move(layout)), capacity_(capacity), row_size_(layout_.row_size()) {
  if (capacity_ == 0) throw ConfigError("replay capacity must be positive");
  if (layout_.agents() == 0) throw ConfigError("replay layout needs at least one agent");
}

void ReplayBuffer::store(const Transition& t) {
  const std::size_t n = layout_.agents();
  require(t.state.size(), layout_.state_dim, "state");
  require(t.next_state.size(), layout_.state_dim, "next_state");
  require(t.obs.size(), n, "obs");
  require(t.next_obs.size(), n, "next_obs");
  require(t.actions.size(), n, "actions");
  require(t.rewards.size(), n, "rewards");
  for (std::size_t i = 0; i < n; ++i) {
    require(t.obs[i].size(), layout_.obs_dims[i], "observation");
    require(t.next_obs[i].size(), layout_.obs_dims[i], "next observation");
    require(t.actions[i].size(), layout_.action_dim, "action");
    if (!std::isfinite(t.rewards[i])) throw NumericError("replay store: non-finite reward");
  }

  if (storage_.size() < (head_ + 1) * row_size_) storage_.resize((head_ + 1) * row_size_);
  double* dst = storage_.data() + head_ * row_size_;
  dst = put(dst, t.state);
  for (const auto& o : t.obs) dst = put(dst, o);
  for (const auto& a : t.actions) dst = put(dst, a);
  dst = put(dst, t.rewards);
  dst = put(dst, t.next_state);
  for (const auto& o : t.next_obs) dst = put(dst, o);

  head_ = (head_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
  ++inserted_;
}

std::size_t ReplayBuffer::slot_of(std::size_t i) const {
  if (i >= size_) throw UsageError("replay index out of range");
  return size_ < capacity_ ? i : (head_ + i) % capacity_;
}

TransitionBatch ReplayBuffer::sample(std::size_t batch_size, Rng& rng) const {
  if (size_ < batch_size || size_ == 0) {
    throw NotEnoughSamples("replay holds " + std::to_string(size_) + " transitions, batch needs " +
                           std::to_string(batch_size));
  }
  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  std::vector<std::size_t> idx(batch_size);
  for (auto& i : idx) i = pick(rng);
  return gather(idx);
}

TransitionBatch ReplayBuffer::gather(const std::vector<std::size_t>& indices) const {
  const std::size_t b = indices.size();
  const std::size_t n = layout_.agents();
  TransitionBatch batch;
  batch.state = nn::Matrix(b, layout_.state_dim);
  batch.next_state = nn::Matrix(b, layout_.state_dim);
  batch.rewards = nn::Matrix(b, n);
  for (std::size_t i = 0; i < n; ++i) {
    batch.obs.emplace_back(b, layout_.obs_dims[i]);
    batch.next_obs.emplace_back(b, layout_.obs_dims[i]);
    batch.actions.emplace_back(b, layout_.action_dim);
  }
  auto take = [](const double*& src, std::span<double> dst) {
    std::memcpy(dst.data(), src, dst.size() * sizeof(double));
    src += dst.size();
  };
  for (std::size_t j = 0; j < b; ++j) {
    const double* src = row(slot_of(indices[j]));
    take(src, batch.state.row(j));
    for (std::size_t i = 0; i < n; ++i) take(src, batch.obs[i].row(j));
    for (std::size_t i = 0; i < n; ++i) take(src, batch.actions[i].row(j));
    take(src, batch.rewards.row(j));
    take(src, batch.next_state.row(j));
    for (std::size_t i = 0; i < n; ++i) take(src, batch.next_obs[i].row(j));
  }
  return batch;
}

Transition ReplayBuffer::at(std::size_t i) const { return gather({i}).at(0); }

Transition TransitionBatch::at(std::size_t j) const {
  auto vec = [j](const nn::Matrix& m) {
    const auto r = m.row(j);
    return std::vector<double>(r.begin(), r.end());
  };
  Transition t;
  t.state = vec(state);
  t.next_state = vec(next_state);
  t.rewards = vec(rewards);
  for (std::size_t i = 0; i < obs.size(); ++i) {
    t.obs.push_back(vec(obs[i]));
    t.actions.push_back(vec(actions[i]));
    t.next_obs.push_back(vec(next_obs[i]));
  }
  return t;
}

}  // namespace marl::replay
