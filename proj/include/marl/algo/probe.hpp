#pragma once

#include <cstddef>
#include <span>

#include "marl/algo/population.hpp"
#include "marl/algo/trainer.hpp"
#include "marl/replay/replay_buffer.hpp"

namespace marl::algo {

struct ProbeResult {
  double norm_fixed = 0.0;    // waiting members' ||grad J||^2 after value-fixing critic steps
  double norm_bellman = 0.0;  // same, after critic steps with Bellman targets for everyone
};

// Compares the waiting members' policy-gradient norm under the two target
// rules. Starting from the team's current critic and optimizer state, runs one
// critic step per batch in `critic_batches` under each rule, then measures the
// squared norm of the waiting members' actor gradient on `eval_batch`. The
// population itself is left untouched; target networks are held fixed.
ProbeResult gradient_norm_probe(const Population& pop, std::size_t team_index,
                                std::span<const replay::TransitionBatch> critic_batches,
                                const replay::TransitionBatch& eval_batch, double gamma,
                                FixedTargetInputs fixed = FixedTargetInputs::kNextStep);

}  // namespace marl::algo
