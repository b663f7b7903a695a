#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "marl/common/rng.hpp"
#include "marl/nn/matrix.hpp"

namespace marl::nn {

inline constexpr std::size_t kDefaultHidden = 64;

enum class OutputActivation : std::uint32_t {
  kIdentity = 0,  // critics
  kTanh = 1,      // actors, actions in [-1, 1]
};

// Activations recorded by Mlp::forward_cached. Holds the input batch, every
// hidden activation (post-ReLU) and the output (post output activation).
struct ForwardCache {
  std::vector<std::size_t> layer_sizes;
  std::vector<Matrix> activations;

  bool empty() const { return activations.empty(); }
  const Matrix& output() const { return activations.back(); }
};

enum class BackwardMode {
  kFull,        // parameter and input gradients
  kParamsOnly,  // input gradients left empty
  kInputsOnly,  // parameter gradients left empty
};

struct Gradients {
  std::vector<double> params;  // same flat layout as Mlp::parameters()
  Matrix inputs;               // [batch x input_dim]
};

// Fully connected ReLU perceptron. Parameters live in one flat buffer laid out
// layer by layer as row-major weights [in x out] followed by the bias [out].
class Mlp {
 public:
  Mlp() = default;
  // Zero-initialised network. layer_sizes = {input, hidden..., output}.
  Mlp(std::vector<std::size_t> layer_sizes, OutputActivation output_activation);

  // input -> hidden -> hidden -> output.
  static Mlp two_hidden(std::size_t input_dim, std::size_t output_dim,
                        OutputActivation output_activation, std::size_t hidden = kDefaultHidden);

  // Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] for weights and biases.
  void init_uniform(Rng& rng);

  std::size_t input_dim() const { return sizes_.front(); }
  std::size_t output_dim() const { return sizes_.back(); }
  std::size_t layer_count() const { return sizes_.size() - 1; }
  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
  OutputActivation output_activation() const { return output_activation_; }
  std::size_t parameter_count() const { return params_.size(); }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }

  std::span<double> weights(std::size_t layer);
  std::span<const double> weights(std::size_t layer) const;
  std::span<double> bias(std::size_t layer);
  std::span<const double> bias(std::size_t layer) const;

  Matrix forward(const Matrix& batch) const;
  ForwardCache forward_cached(const Matrix& batch) const;

  // Gradients of sum(upstream .* output) with respect to the parameters and
  // the input batch, using the activations recorded in `cache`.
  Gradients backward(const ForwardCache& cache, const Matrix& upstream,
                     BackwardMode mode = BackwardMode::kFull) const;

  bool same_shape(const Mlp& other) const {
    return sizes_ == other.sizes_ && output_activation_ == other.output_activation_;
  }

  friend bool operator==(const Mlp&, const Mlp&) = default;

 private:
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + sizes_[layer] * sizes_[layer + 1];
  }
  void check_input(const Matrix& batch) const;

  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  OutputActivation output_activation_ = OutputActivation::kIdentity;
  std::vector<double> params_;
};

// target <- tau * online + (1 - tau) * target, element-wise.
void soft_update(Mlp& target, const Mlp& online, double tau);

// Sum of squares of all entries.
double grad_norm_sq(std::span<const double> grads);

// FNV-1a over the raw bytes of the parameters; equal iff bit-identical
// (up to hash collisions).
std::uint64_t checksum(const Mlp& net);

}  // namespace marl::nn
