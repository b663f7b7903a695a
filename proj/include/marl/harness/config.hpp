#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "marl/algo/population.hpp"
#include "marl/algo/trainer.hpp"
#include "marl/env/particle_world.hpp"

namespace marl::harness {

enum class Profile { kPaper, kDesk };
Profile parse_profile(std::string_view name);  // "paper", "desk"

struct RunConfig {
  env::Scenario scenario = env::Scenario::kSpread3;
  algo::Algorithm algorithm = algo::Algorithm::kIuur;
  // Predator-prey only: algorithm for the prey team (defaults to `algorithm`).
  std::optional<algo::Algorithm> prey_algorithm;

  std::uint64_t episodes = 100000;   // M
  int steps = 25;                    // T
  std::uint64_t k = 5000;            // learner period
  double tau = 0.01;
  double gamma = 0.95;
  std::size_t batch = 1024;
  std::size_t buffer_capacity = 1000000;
  std::size_t warmup = 1024;         // transitions stored before the first update
  double actor_lr = 1e-3;
  double critic_lr = 1e-3;
  double sigma = 0.1;
  std::size_t hidden = 64;
  std::uint64_t seed = 0;
  // Step read by the waiting members' value-fixing target ("next" or "current").
  algo::FixedTargetInputs fixed_targets = algo::FixedTargetInputs::kNextStep;

  std::filesystem::path out_dir = "runs/default";
  std::uint64_t eval_every = 500;     // 0 disables evaluation
  std::size_t eval_episodes = 10;
  std::uint64_t probe_every = 0;      // unified teams only; 0 disables the probe
  std::size_t probe_steps = 10;       // critic steps per probe rule
  std::uint64_t checkpoint_every = 0; // 0: final checkpoint only
  bool write_checkpoint = true;
};

// Paper-scale settings (100,000 episodes, K = 5000).
RunConfig paper_profile();
// Desk-scale settings (5,000 episodes, K = 250) sized for a laptop CPU.
RunConfig desk_profile();
RunConfig profile(Profile p);

// Throws ConfigError naming the first offending field.
void validate(const RunConfig& cfg);

// Overlays the keys present in a JSON object onto `cfg`. Keys use the CLI
// flag spelling with dashes replaced by underscores ("prey_algo", "eval_every").
void apply_json(RunConfig& cfg, const std::string& json_text);
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);
std::string to_json(const RunConfig& cfg);

env::EnvConfig env_config(const RunConfig& cfg);
algo::PopulationSpec population_spec(const RunConfig& cfg, const env::ParticleWorld& world);

}  // namespace marl::harness
