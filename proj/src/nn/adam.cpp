#include "marl/nn/adam.hpp"

#include <cmath>
#include <string>

#include "marl/common/errors.hpp"

namespace marl::nn {

Adam::Adam(std::size_t parameter_count, AdamConfig config)
    : config_(config), m_(parameter_count, 0.0), v_(parameter_count, 0.0) {}

void Adam::step(Mlp& net, std::span<const double> grads) { step(net.parameters(), grads); }

void Adam::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw ConfigError("Adam: parameter/gradient size " + std::to_string(grads.size()) +
                      " does not match accumulator size " + std::to_string(m_.size()));
  }
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!std::isfinite(grads[i])) {
      throw NumericError("Adam: non-finite gradient at index " + std::to_string(i) + " (" +
                         std::to_string(grads[i]) + ")");
    }
  }
  ++steps_;
  const double t = static_cast<double>(steps_);
  const double c1 = 1.0 - std::pow(config_.beta1, t);
  const double c2 = 1.0 - std::pow(config_.beta2, t);
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    m_[i] = b1 * m_[i] + (1.0 - b1) * g;
    v_[i] = b2 * v_[i] + (1.0 - b2) * g * g;
    const double m_hat = m_[i] / c1;
    const double v_hat = v_[i] / c2;
    params[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
  }
}

}  // namespace marl::nn
