#pragma once

#include <filesystem>
#include <string>

#include "marl/algo/population.hpp"
#include "marl/env/particle_world.hpp"

namespace marl::algo {

// A population checkpoint is a directory holding manifest.json plus one .mlp
// file per network (see nn/checkpoint.hpp). The manifest records the scenario,
// episode length, layout and team map, so `eval` can rebuild the world.
// Optimizer moments are not saved; a loaded population starts with fresh Adam
// state.
struct PopulationCheckpoint {
  Population population;
  env::Scenario scenario = env::Scenario::kSpread3;
  int episode_length = 25;
};

void save_population(const std::filesystem::path& dir, const Population& pop,
                     env::Scenario scenario, int episode_length);
PopulationCheckpoint load_population(const std::filesystem::path& dir);

}  // namespace marl::algo
