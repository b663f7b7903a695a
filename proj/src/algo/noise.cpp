#include "marl/algo/noise.hpp"

#include "marl/common/errors.hpp"

namespace marl::algo {

GaussianNoise::GaussianNoise(double sigma, std::uint64_t seed) : sigma_(sigma), rng_(seed) {
  if (!(sigma >= 0.0)) throw ConfigError("noise sigma must be non-negative");
}

const std::vector<env::Action>& GaussianNoise::sample(std::size_t agents) {
  last_.assign(agents, env::Action{0.0, 0.0});
  if (sigma_ == 0.0) return last_;
  std::normal_distribution<double> dist(0.0, sigma_);
  for (auto& a : last_) {
    for (double& c : a) c = dist(rng_);
  }
  return last_;
}

}  // namespace marl::algo
