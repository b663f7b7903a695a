#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "marl/algo/population.hpp"
#include "marl/env/particle_world.hpp"
#include "marl/harness/config.hpp"

namespace marl::harness {

inline constexpr const char* kTimingCsvHeader = "phase,algo,scenario,layout,mean_seconds,samples";

struct TimingReport {
  std::string phase;  // "interaction" (seconds per step) or "training" (seconds per episode)
  std::string algo;
  std::string scenario;
  std::string layout;
  double mean_seconds = 0.0;
  std::uint64_t samples = 0;
};

void write_timing_csv(const std::filesystem::path& path, const std::vector<TimingReport>& rows);

struct TimingPair {
  TimingReport baseline;
  TimingReport candidate;
  // baseline time / candidate time; > 1 means the candidate is faster.
  double speedup() const { return baseline.mean_seconds / candidate.mean_seconds; }
};

// Per-agent and unified populations for the same scenario whose actors hold
// identical parameters, so both layouts produce the same actions.
std::pair<algo::Population, algo::Population> twin_populations(const algo::PopulationSpec& spec,
                                                                std::uint64_t seed);

// Interaction time per environment step (action selection with exploration
// noise plus the world step): per-agent sequential layout as baseline,
// unified batched layout as candidate. At least `steps` steps are timed per
// layout after `warmup_steps` untimed ones; the two layouts alternate in
// blocks, and the window doubles until it spans at least `min_seconds`.
TimingPair bench_interaction(env::Scenario scenario, std::uint64_t steps, std::uint64_t seed,
                             std::uint64_t warmup_steps = 1000, double min_seconds = 0.05);

// Action selection alone on fixed observations, for arbitrary populations
// (e.g. a single-agent team where batching has nothing to gain).
TimingPair bench_action_selection(const algo::Population& baseline,
                                  const algo::Population& candidate,
                                  const std::vector<std::vector<double>>& observations,
                                  std::uint64_t calls, double min_seconds = 0.05);

// Wall-clock training time per episode for two configurations at equal
// episode counts. The two runs advance in alternating blocks of episodes so
// that machine-load drift affects both alike.
TimingPair bench_training(const RunConfig& baseline, const RunConfig& candidate);

}  // namespace marl::harness
