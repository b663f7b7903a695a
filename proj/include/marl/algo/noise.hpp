#pragma once

#include <cstdint>
#include <vector>

#include "marl/common/rng.hpp"
#include "marl/env/particle_world.hpp"

namespace marl::algo {

// Independent zero-mean Gaussian exploration noise per action component.
class GaussianNoise {
 public:
  GaussianNoise(double sigma, std::uint64_t seed);

  // One draw per agent, in agent order. The draws are also kept in last_draws().
  const std::vector<env::Action>& sample(std::size_t agents);
  const std::vector<env::Action>& last_draws() const { return last_; }
  double sigma() const { return sigma_; }

 private:
  double sigma_;
  Rng rng_;
  std::vector<env::Action> last_;
};

}  // namespace marl::algo
