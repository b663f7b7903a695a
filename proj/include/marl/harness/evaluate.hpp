#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "marl/algo/population.hpp"
#include "marl/env/particle_world.hpp"

namespace marl::harness {

// Noiseless rollouts. Returns [episode][agent] undiscounted returns. The
// world is seeded from `seed`, so equal seeds give equal start states.
std::vector<std::vector<double>> rollout_returns(const algo::Population& pop,
                                                 const env::EnvConfig& env_config,
                                                 std::size_t episodes, std::uint64_t seed);

// Per-agent mean return over `episodes` noiseless rollouts.
std::vector<double> evaluate(const algo::Population& pop, const env::EnvConfig& env_config,
                             std::size_t episodes, std::uint64_t seed);

}  // namespace marl::harness
