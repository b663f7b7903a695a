#include "marl/algo/probe.hpp"

#include "marl/algo/trainer.hpp"
#include "marl/common/errors.hpp"

namespace marl::algo {
namespace {

double probe_rule(const Population& pop, std::size_t t,
                  std::span<const replay::TransitionBatch> critic_batches,
                  const replay::TransitionBatch& eval_batch, double gamma, TargetRule rule,
                  FixedTargetInputs fixed) {
  const TeamModel& team = pop.teams()[t];
  std::vector<std::size_t> all(team.size());
  for (std::size_t m = 0; m < all.size(); ++m) all[m] = m;

  ActorCritic nets = team.nets.front();
  for (const replay::TransitionBatch& batch : critic_batches) {
    const std::vector<double> y =
        team_targets(pop, t, all, batch, target_next_actions(pop, batch), gamma, rule, fixed);
    const nn::Matrix x =
        stacked_critic_input(pop, team, all, batch.state, batch.obs, batch.actions);
    update_critic(nets, x, y);
  }
  const std::vector<std::size_t> waiting = team.waiting();
  if (waiting.empty()) return 0.0;
  return nn::grad_norm_sq(policy_gradient(pop, t, nets, waiting, eval_batch));
}

}  // namespace

ProbeResult gradient_norm_probe(const Population& pop, std::size_t team_index,
                                std::span<const replay::TransitionBatch> critic_batches,
                                const replay::TransitionBatch& eval_batch, double gamma,
                                FixedTargetInputs fixed) {
  if (pop.teams().at(team_index).layout() != Layout::kUnified) {
    throw ConfigError("gradient-norm probe needs a unified team");
  }
  ProbeResult r;
  r.norm_fixed =
      probe_rule(pop, team_index, critic_batches, eval_batch, gamma, TargetRule::kValueFixing,
                 fixed);
  r.norm_bellman =
      probe_rule(pop, team_index, critic_batches, eval_batch, gamma, TargetRule::kBellmanAll,
                 fixed);
  return r;
}

}  // namespace marl::algo
