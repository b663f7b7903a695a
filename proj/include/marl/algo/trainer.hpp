#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "marl/algo/noise.hpp"
#include "marl/algo/population.hpp"
#include "marl/nn/matrix.hpp"
#include "marl/replay/replay_buffer.hpp"

namespace marl::algo {

enum class ActionMode { kExplore, kExploit };

// One action per agent. A unified team computes all of its members' actions
// in a single batched forward pass; per-agent teams run one pass per agent.
// Explore mode adds one noise draw per agent; results are clipped to [-1, 1].
std::vector<env::Action> select_actions(const Population& pop,
                                        const std::vector<std::vector<double>>& observations,
                                        ActionMode mode, GaussianNoise* noise = nullptr);

// Target-actor actions mu'_j(o_j) for one observation block per agent.
std::vector<nn::Matrix> target_actions(const Population& pop, const std::vector<nn::Matrix>& obs);

// Target-actor next actions a'_j = mu'_j(o'_j), one B x |a| matrix per agent.
std::vector<nn::Matrix> target_next_actions(const Population& pop,
                                            const replay::TransitionBatch& batch);

// Critic inputs for `members` of a team stacked in member order, B rows each:
// [s | o_i | a_1 .. a_N] for unified teams and [s | a_1 .. a_N] otherwise.
// When `own_actions` is given, block k uses its rows for member k's own
// action slot instead of `actions`.
nn::Matrix stacked_critic_input(const Population& pop, const TeamModel& team,
                                std::span<const std::size_t> members, const nn::Matrix& state,
                                const std::vector<nn::Matrix>& obs,
                                const std::vector<nn::Matrix>& actions,
                                const nn::Matrix* own_actions = nullptr);

// Q'(s', o'_i, a'_1 .. a'_N) for each member, stacked like stacked_critic_input.
std::vector<double> target_values(const Population& pop, std::size_t team_index,
                                  std::span<const std::size_t> members,
                                  const replay::TransitionBatch& batch,
                                  const std::vector<nn::Matrix>& next_actions);

enum class TargetRule {
  kValueFixing,  // Bellman for the learner, raw target-critic value for waiting members
  kBellmanAll,   // Bellman for every member
};

// Which step the waiting members' value-fixing target reads. The written rule
// y = Q'(s, o_i, mu'(o_1) .. mu'(o_N)) leaves the time index implicit, as the
// Bellman rule does; kNextStep reads s', o' like the Bellman target.
// kCurrentStep reads the transition's own s, o, which makes the target the
// critic's current value instead of an undiscounted bootstrap.
enum class FixedTargetInputs { kNextStep, kCurrentStep };

std::string_view fixed_target_inputs_name(FixedTargetInputs f);  // "next", "current"
FixedTargetInputs parse_fixed_target_inputs(std::string_view name);

// Regression targets for `members`, stacked in member order.
std::vector<double> team_targets(const Population& pop, std::size_t team_index,
                                 std::span<const std::size_t> members,
                                 const replay::TransitionBatch& batch,
                                 const std::vector<nn::Matrix>& next_actions, double gamma,
                                 TargetRule rule,
                                 FixedTargetInputs fixed = FixedTargetInputs::kNextStep);

// y_i = r_i + gamma * Q'(...) for one agent.
std::vector<double> compute_targets_bellman(const Population& pop,
                                            const replay::TransitionBatch& batch,
                                            std::size_t agent, double gamma);

// y_i = Q'(...) for one agent of a unified team: no reward, no discount.
std::vector<double> compute_targets_fixed(const Population& pop,
                                          const replay::TransitionBatch& batch, std::size_t agent,
                                          FixedTargetInputs fixed = FixedTargetInputs::kNextStep);

// One Adam step on the mean squared error between critic(inputs) and the
// targets, which are treated as constants. Returns the loss before the step.
double update_critic(ActorCritic& nets, const nn::Matrix& inputs, std::span<const double> targets);

// Parameter gradient of -J, where J is the mean over the members' samples of
// Q(s, o_i, a_1 .. mu(o_i) .. a_N) with the other actions taken from the batch.
std::vector<double> policy_gradient(const Population& pop, std::size_t team_index,
                                    const ActorCritic& nets, std::span<const std::size_t> members,
                                    const replay::TransitionBatch& batch);

// Deterministic policy gradient ascent step for `members` (which share the
// actor in `nets`). Returns the squared norm of the gradient that was applied.
double update_actor(Population& pop, std::size_t team_index, std::span<const std::size_t> members,
                    const replay::TransitionBatch& batch);

// Soft-updates both target networks.
void soft_update_targets(ActorCritic& nets, double tau);

struct UpdateConfig {
  double gamma = 0.95;
  double tau = 0.01;
  FixedTargetInputs fixed_inputs = FixedTargetInputs::kNextStep;
};

struct TeamUpdateStats {
  double critic_loss = 0.0;
  double actor_grad_norm_sq = 0.0;
  std::size_t updated_members = 0;
};

// One training step for every team on a shared batch:
//  - MADDPG: every agent updates its own critic (Bellman), actor and targets.
//    Each agent's trainer evaluates all target actors for its own targets.
//  - IU: only the team's current learner updates; waiting agents are frozen.
//  - IUUR: one stacked critic regression over all members with value-fixing
//    targets, one actor step summed over all members, then target updates.
std::vector<TeamUpdateStats> update_population(Population& pop,
                                               const replay::TransitionBatch& batch,
                                               const UpdateConfig& config);

// Learner schedules of all teams, after episode `episode` has finished.
void advance_learners(Population& pop, std::uint64_t episode);

}  // namespace marl::algo
