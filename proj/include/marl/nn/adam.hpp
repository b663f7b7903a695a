#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "marl/nn/mlp.hpp"

namespace marl::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  friend bool operator==(const AdamConfig&, const AdamConfig&) = default;
};

// First/second moment accumulators for one parameter vector.
class Adam {
 public:
  Adam() = default;
  Adam(std::size_t parameter_count, AdamConfig config);

  // One bias-corrected Adam step on `net`. Throws NumericError if any gradient
  // entry is non-finite; the network and accumulators are left untouched then.
  void step(Mlp& net, std::span<const double> grads);
  void step(std::span<double> params, std::span<const double> grads);

  std::uint64_t step_count() const { return steps_; }
  const AdamConfig& config() const { return config_; }
  std::span<const double> first_moment() const { return m_; }
  std::span<const double> second_moment() const { return v_; }

  friend bool operator==(const Adam&, const Adam&) = default;

 private:
  AdamConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::uint64_t steps_ = 0;
};

}  // namespace marl::nn
