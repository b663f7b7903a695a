#pragma once

// Populations and random batches shared by the algorithm tests and the
// acceptance runner.

#include <cstddef>
#include <vector>

#include "marl/algo/population.hpp"
#include "marl/common/rng.hpp"
#include "marl/env/particle_world.hpp"
#include "marl/replay/replay_buffer.hpp"
#include "oracles.hpp"

namespace fixture {

inline marl::env::ParticleWorld world(marl::env::Scenario s, std::uint64_t seed = 0) {
  marl::env::EnvConfig c;
  c.scenario = s;
  c.seed = seed;
  return marl::env::ParticleWorld(c);
}

inline marl::algo::Population population(marl::env::Scenario s, marl::algo::Algorithm a,
                                         std::uint64_t seed, std::uint64_t period = 5000,
                                         std::size_t hidden = 64) {
  marl::algo::PopulationSpec spec = marl::algo::spec_for_world(world(s), a);
  spec.learner_period = period;
  spec.hidden = hidden;
  marl::Rng rng(seed);
  return marl::algo::Population(spec, rng);
}

// Random transitions with actions in [-1, 1] and the given dimensions.
inline marl::replay::TransitionBatch random_batch(const marl::algo::PopulationSpec& spec,
                                                  std::size_t b, marl::Rng& rng) {
  marl::replay::TransitionBatch batch;
  batch.state = oracle::random_matrix(b, spec.state_dim, rng);
  batch.next_state = oracle::random_matrix(b, spec.state_dim, rng);
  for (std::size_t i = 0; i < spec.agent_count(); ++i) {
    batch.obs.push_back(oracle::random_matrix(b, spec.obs_dims[i], rng));
    batch.next_obs.push_back(oracle::random_matrix(b, spec.obs_dims[i], rng));
    batch.actions.push_back(oracle::random_matrix(b, spec.action_dim, rng));
  }
  batch.rewards = oracle::random_matrix(b, spec.agent_count(), rng, 5.0);
  return batch;
}

inline void zero(marl::nn::Mlp& net) {
  for (double& p : net.parameters()) p = 0.0;
}

}  // namespace fixture
