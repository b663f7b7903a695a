#include "marl/nn/mlp.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "kernels.hpp"
#include "marl/common/errors.hpp"

namespace marl::nn {
namespace {

void apply_tanh(Matrix& m) {
  for (double& v : m.values()) v = std::tanh(v);
}

// Wt[out x in] = W[in x out]^T
void transpose_into(std::span<const double> w, std::size_t in, std::size_t out,
                    std::vector<double>& wt) {
  wt.resize(in * out);
  for (std::size_t i = 0; i < in; ++i) {
    for (std::size_t j = 0; j < out; ++j) wt[j * in + i] = w[i * out + j];
  }
}

}  // namespace

Matrix hconcat(std::span<const Matrix* const> blocks) {
  if (blocks.empty()) return {};
  const std::size_t rows = blocks.front()->rows();
  std::size_t cols = 0;
  for (const Matrix* b : blocks) {
    if (b->rows() != rows) throw ConfigError("hconcat: row count mismatch");
    cols += b->cols();
  }
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    double* dst = out.row(r).data();
    for (const Matrix* b : blocks) {
      const auto src = b->row(r);
      std::memcpy(dst, src.data(), src.size() * sizeof(double));
      dst += src.size();
    }
  }
  return out;
}

Matrix vstack(std::span<const Matrix* const> blocks) {
  if (blocks.empty()) return {};
  const std::size_t cols = blocks.front()->cols();
  std::size_t rows = 0;
  for (const Matrix* b : blocks) {
    if (b->cols() != cols) throw ConfigError("vstack: column count mismatch");
    rows += b->rows();
  }
  Matrix out(rows, cols);
  double* dst = out.data();
  for (const Matrix* b : blocks) {
    std::memcpy(dst, b->data(), b->size() * sizeof(double));
    dst += b->size();
  }
  return out;
}

Mlp::Mlp(std::vector<std::size_t> layer_sizes, OutputActivation output_activation)
    : sizes_(std::move(layer_sizes)), output_activation_(output_activation) {
  if (sizes_.size() < 2) throw ConfigError("Mlp needs at least an input and an output size");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] == 0 || sizes_[l + 1] == 0) throw ConfigError("Mlp layer sizes must be positive");
    offsets_.push_back(total);
    total += sizes_[l] * sizes_[l + 1] + sizes_[l + 1];
  }
  params_.assign(total, 0.0);
}

Mlp Mlp::two_hidden(std::size_t input_dim, std::size_t output_dim,
                    OutputActivation output_activation, std::size_t hidden) {
  return Mlp({input_dim, hidden, hidden, output_dim}, output_activation);
}

void Mlp::init_uniform(Rng& rng) {
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& w : weights(l)) w = dist(rng);
    for (double& b : bias(l)) b = dist(rng);
  }
}

std::span<double> Mlp::weights(std::size_t layer) {
  return {params_.data() + weight_offset(layer), sizes_[layer] * sizes_[layer + 1]};
}
std::span<const double> Mlp::weights(std::size_t layer) const {
  return {params_.data() + weight_offset(layer), sizes_[layer] * sizes_[layer + 1]};
}
std::span<double> Mlp::bias(std::size_t layer) {
  return {params_.data() + bias_offset(layer), sizes_[layer + 1]};
}
std::span<const double> Mlp::bias(std::size_t layer) const {
  return {params_.data() + bias_offset(layer), sizes_[layer + 1]};
}

void Mlp::check_input(const Matrix& batch) const {
  if (sizes_.empty()) throw UsageError("forward on an empty network");
  if (batch.cols() != input_dim()) {
    throw ConfigError("Mlp input has " + std::to_string(batch.cols()) + " columns, expected " +
                      std::to_string(input_dim()));
  }
}

Matrix Mlp::forward(const Matrix& batch) const {
  check_input(batch);
  const std::size_t rows = batch.rows();
  Matrix a, b;
  const Matrix* x = &batch;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    Matrix& y = (l % 2 == 0) ? a : b;
    y.resize(rows, sizes_[l + 1]);
    const bool hidden = l + 1 < layer_count();
    detail::gemm(rows, sizes_[l], sizes_[l + 1], x->data(), sizes_[l], 1, weights(l).data(),
                 bias(l).data(), y.data(), hidden);
    x = &y;
  }
  Matrix out = (layer_count() % 2 == 1) ? std::move(a) : std::move(b);
  if (output_activation_ == OutputActivation::kTanh) apply_tanh(out);
  return out;
}

ForwardCache Mlp::forward_cached(const Matrix& batch) const {
  check_input(batch);
  ForwardCache cache;
  cache.layer_sizes = sizes_;
  cache.activations.reserve(sizes_.size());
  cache.activations.push_back(batch);
  const std::size_t rows = batch.rows();
  for (std::size_t l = 0; l < layer_count(); ++l) {
    Matrix y(rows, sizes_[l + 1]);
    const bool hidden = l + 1 < layer_count();
    detail::gemm(rows, sizes_[l], sizes_[l + 1], cache.activations.back().data(), sizes_[l], 1,
                 weights(l).data(), bias(l).data(), y.data(), hidden);
    cache.activations.push_back(std::move(y));
  }
  if (output_activation_ == OutputActivation::kTanh) apply_tanh(cache.activations.back());
  return cache;
}

Gradients Mlp::backward(const ForwardCache& cache, const Matrix& upstream,
                        BackwardMode mode) const {
  if (cache.empty()) throw UsageError("backward called without a cached forward pass");
  if (cache.layer_sizes != sizes_) throw UsageError("forward cache belongs to a different network");
  const std::size_t rows = cache.activations.front().rows();
  if (upstream.rows() != rows || upstream.cols() != output_dim()) {
    throw ConfigError("upstream gradient shape does not match the cached output");
  }
  const bool want_params = mode != BackwardMode::kInputsOnly;
  const bool want_inputs = mode != BackwardMode::kParamsOnly;

  Gradients grads;
  if (want_params) grads.params.assign(params_.size(), 0.0);

  Matrix delta = upstream;
  if (output_activation_ == OutputActivation::kTanh) {
    const auto y = cache.output().values();
    auto d = delta.values();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] *= 1.0 - y[i] * y[i];
  }

  std::vector<double> wt;
  for (std::size_t l = layer_count(); l-- > 0;) {
    const std::size_t in = sizes_[l];
    const std::size_t out = sizes_[l + 1];
    const Matrix& x = cache.activations[l];
    if (want_params) {
      double* dw = grads.params.data() + weight_offset(l);
      if (out == 1) {
        // dW^T = delta^T X: one long row instead of `in` strided dot products.
        detail::gemm(1, rows, in, delta.data(), rows, 1, x.data(), nullptr, dw, false);
      } else {
        detail::gemm(in, rows, out, x.data(), 1, in, delta.data(), nullptr, dw, false);
      }
      double* db = grads.params.data() + bias_offset(l);
      for (std::size_t r = 0; r < rows; ++r) {
        const double* d = delta.data() + r * out;
        for (std::size_t j = 0; j < out; ++j) db[j] += d[j];
      }
    }
    if (l == 0 && !want_inputs) break;
    transpose_into(weights(l), in, out, wt);
    Matrix dx(rows, in);
    detail::gemm(rows, out, in, delta.data(), out, 1, wt.data(), nullptr, dx.data(), false);
    if (l > 0) {
      const auto h = x.values();
      auto g = dx.values();
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (!(h[i] > 0.0)) g[i] = 0.0;
      }
    }
    delta = std::move(dx);
  }
  if (want_inputs) grads.inputs = std::move(delta);
  return grads;
}

void soft_update(Mlp& target, const Mlp& online, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("soft_update: tau must lie in [0, 1]");
  if (!target.same_shape(online)) throw ConfigError("soft_update: network shapes differ");
  auto t = target.parameters();
  const auto o = online.parameters();
  if (tau == 1.0) {
    std::copy(o.begin(), o.end(), t.begin());
    return;
  }
  if (tau == 0.0) return;
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = tau * o[i] + (1.0 - tau) * t[i];
}

double grad_norm_sq(std::span<const double> grads) {
  double s = 0.0;
  for (double g : grads) s += g * g;
  return s;
}

std::uint64_t checksum(const Mlp& net) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto params = net.parameters();
  const auto* bytes = reinterpret_cast<const unsigned char*>(params.data());
  for (std::size_t i = 0; i < params.size_bytes(); ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace marl::nn
