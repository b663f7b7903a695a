#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "marl/algo/noise.hpp"
#include "marl/algo/population.hpp"
#include "marl/algo/probe.hpp"
#include "marl/env/particle_world.hpp"
#include "marl/harness/config.hpp"
#include "marl/replay/replay_buffer.hpp"

namespace marl::harness {

inline constexpr const char* kRewardCsvHeader = "episode,algo,scenario,seed,agent_id,episode_return";
inline constexpr const char* kEvalCsvHeader = "episode,algo,scenario,seed,agent_id,mean_return";
inline constexpr const char* kProbeCsvHeader =
    "episode,algo,scenario,seed,team,learner,norm_fixed,norm_bellman";

struct EvalPoint {
  std::uint64_t episode = 0;
  std::vector<double> mean_returns;  // per agent

  double mean() const;  // over agents
};

struct ProbePoint {
  std::uint64_t episode = 0;
  std::size_t team_index = 0;
  env::Team team = env::Team::kNone;
  std::size_t learner = 0;  // 1-based
  algo::ProbeResult result;
};

// One training run: world, population, replay buffer and random streams. Each
// call to run_episode plays one exploration episode and performs one update
// per environment step once the buffer holds `warmup` transitions.
class TrainingSession {
 public:
  explicit TrainingSession(RunConfig cfg);

  // Returns the per-agent undiscounted returns of the episode just played.
  // A NumericError is rethrown with the episode and step attached.
  std::vector<double> run_episode();

  // Noiseless evaluation on the run's fixed evaluation seed.
  EvalPoint evaluate_now() const;
  // Gradient-norm probe on every unified team; empty if the buffer is too
  // small or no team is unified.
  std::vector<ProbePoint> probe_now() const;

  std::uint64_t episodes_done() const { return episode_; }
  std::uint64_t updates_done() const { return updates_; }
  // Seconds spent choosing actions and stepping the world.
  double interaction_seconds() const { return interaction_seconds_; }
  std::uint64_t interaction_steps() const { return interaction_steps_; }

  const RunConfig& config() const { return cfg_; }
  const env::ParticleWorld& world() const { return world_; }
  const algo::Population& population() const { return pop_; }
  algo::Population& population() { return pop_; }
  const replay::ReplayBuffer& buffer() const { return buffer_; }

 private:
  RunConfig cfg_;
  env::ParticleWorld world_;
  algo::Population pop_;
  replay::ReplayBuffer buffer_;
  algo::GaussianNoise noise_;
  Rng sample_rng_;
  std::uint64_t episode_ = 0;
  std::uint64_t updates_ = 0;
  double interaction_seconds_ = 0.0;
  std::uint64_t interaction_steps_ = 0;
};

struct TrainingSummary {
  std::vector<std::vector<double>> returns;  // [episode - 1][agent]
  std::vector<EvalPoint> evals;
  std::vector<ProbePoint> probes;
  double seconds = 0.0;
  double interaction_seconds_per_step = 0.0;
};

// Runs cfg.episodes episodes. Writes into cfg.out_dir: rewards.csv, eval.csv,
// probe.csv (when probing), timing.csv, config.json and checkpoint/.
TrainingSummary run_training(const RunConfig& cfg);

}  // namespace marl::harness
