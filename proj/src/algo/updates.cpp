#include <cmath>
#include <numeric>
#include <string>

#include "marl/algo/trainer.hpp"
#include "marl/common/errors.hpp"

namespace marl::algo {

double update_critic(ActorCritic& nets, const nn::Matrix& inputs, std::span<const double> targets) {
  const std::size_t rows = inputs.rows();
  if (targets.size() != rows) throw ConfigError("update_critic: one target per input row required");
  const nn::ForwardCache cache = nets.critic.forward_cached(inputs);
  const nn::Matrix& q = cache.output();
  nn::Matrix upstream(rows, 1);
  double loss = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double err = q(r, 0) - targets[r];
    loss += err * err;
    upstream(r, 0) = 2.0 * err / static_cast<double>(rows);
  }
  loss /= static_cast<double>(rows);
  if (!std::isfinite(loss)) throw NumericError("critic loss is not finite");
  const nn::Gradients g = nets.critic.backward(cache, upstream, nn::BackwardMode::kParamsOnly);
  nets.critic_opt.step(nets.critic, g.params);
  return loss;
}

std::vector<double> policy_gradient(const Population& pop, std::size_t team_index,
                                    const ActorCritic& nets, std::span<const std::size_t> members,
                                    const replay::TransitionBatch& batch) {
  const TeamModel& team = pop.teams().at(team_index);
  const bool unified = team.layout() == Layout::kUnified;
  if (!unified && members.size() != 1) {
    throw UsageError("policy_gradient: per-agent networks serve exactly one member");
  }
  const std::size_t b = batch.size();
  const std::size_t adim = pop.spec().action_dim;

  std::vector<const nn::Matrix*> blocks;
  for (std::size_t m : members) blocks.push_back(&batch.obs[team.agents.at(m)]);
  const nn::ForwardCache actor_cache = nets.actor.forward_cached(nn::vstack(blocks));
  const nn::Matrix& own = actor_cache.output();

  const nn::Matrix x =
      stacked_critic_input(pop, team, members, batch.state, batch.obs, batch.actions, &own);
  const nn::ForwardCache critic_cache = nets.critic.forward_cached(x);
  const std::size_t rows = x.rows();
  nn::Matrix upstream(rows, 1, -1.0 / static_cast<double>(rows));
  const nn::Gradients cg = nets.critic.backward(critic_cache, upstream, nn::BackwardMode::kInputsOnly);

  const std::size_t prefix =
      pop.spec().state_dim + (unified ? pop.spec().obs_dims[team.agents.front()] : 0);
  nn::Matrix d_action(rows, adim);
  for (std::size_t k = 0; k < members.size(); ++k) {
    const std::size_t offset = prefix + team.agents[members[k]] * adim;
    for (std::size_t r = 0; r < b; ++r) {
      for (std::size_t c = 0; c < adim; ++c) {
        d_action(k * b + r, c) = cg.inputs(k * b + r, offset + c);
      }
    }
  }
  nn::Gradients ag = nets.actor.backward(actor_cache, d_action, nn::BackwardMode::kParamsOnly);
  return std::move(ag.params);
}

double update_actor(Population& pop, std::size_t team_index, std::span<const std::size_t> members,
                    const replay::TransitionBatch& batch) {
  if (members.empty()) throw UsageError("update_actor: no members given");
  ActorCritic& nets = pop.teams().at(team_index).nets_of(members.front());
  const std::vector<double> g = policy_gradient(pop, team_index, nets, members, batch);
  const double norm_sq = nn::grad_norm_sq(g);
  if (!std::isfinite(norm_sq)) throw NumericError("policy gradient is not finite");
  nets.actor_opt.step(nets.actor, g);
  return norm_sq;
}

void soft_update_targets(ActorCritic& nets, double tau) {
  nn::soft_update(nets.target_actor, nets.actor, tau);
  nn::soft_update(nets.target_critic, nets.critic, tau);
}

namespace {

// Self-contained per-agent trainer step (MADDPG, IU).
TeamUpdateStats update_member(Population& pop, std::size_t t, std::size_t member,
                              const replay::TransitionBatch& batch, const UpdateConfig& config) {
  const std::size_t members[] = {member};
  const std::vector<nn::Matrix> next = target_next_actions(pop, batch);
  const std::vector<double> y =
      team_targets(pop, t, members, batch, next, config.gamma, TargetRule::kBellmanAll);
  TeamModel& team = pop.teams()[t];
  const nn::Matrix x =
      stacked_critic_input(pop, team, members, batch.state, batch.obs, batch.actions);
  TeamUpdateStats s;
  s.critic_loss = update_critic(team.nets_of(member), x, y);
  s.actor_grad_norm_sq = update_actor(pop, t, members, batch);
  soft_update_targets(team.nets_of(member), config.tau);
  s.updated_members = 1;
  return s;
}

TeamUpdateStats update_unified(Population& pop, std::size_t t, const replay::TransitionBatch& batch,
                               const UpdateConfig& config) {
  TeamModel& team = pop.teams()[t];
  std::vector<std::size_t> members(team.size());
  std::iota(members.begin(), members.end(), 0);
  const std::vector<nn::Matrix> next = target_next_actions(pop, batch);
  const std::vector<double> y =
      team_targets(pop, t, members, batch, next, config.gamma, TargetRule::kValueFixing,
                   config.fixed_inputs);
  const nn::Matrix x =
      stacked_critic_input(pop, team, members, batch.state, batch.obs, batch.actions);
  TeamUpdateStats s;
  s.critic_loss = update_critic(team.nets.front(), x, y);
  s.actor_grad_norm_sq = update_actor(pop, t, members, batch);
  soft_update_targets(team.nets.front(), config.tau);
  s.updated_members = team.size();
  return s;
}

}  // namespace

std::vector<TeamUpdateStats> update_population(Population& pop,
                                               const replay::TransitionBatch& batch,
                                               const UpdateConfig& config) {
  std::vector<TeamUpdateStats> stats;
  for (std::size_t t = 0; t < pop.teams().size(); ++t) {
    const TeamModel& team = pop.teams()[t];
    switch (team.algorithm) {
      case Algorithm::kMaddpg: {
        TeamUpdateStats total;
        for (std::size_t m = 0; m < team.size(); ++m) {
          const TeamUpdateStats s = update_member(pop, t, m, batch, config);
          total.critic_loss += s.critic_loss / static_cast<double>(team.size());
          total.actor_grad_norm_sq += s.actor_grad_norm_sq;
          total.updated_members += 1;
        }
        stats.push_back(total);
        break;
      }
      case Algorithm::kIu:
        stats.push_back(update_member(pop, t, team.schedule.learner_index(), batch, config));
        break;
      case Algorithm::kIuur:
        stats.push_back(update_unified(pop, t, batch, config));
        break;
    }
  }
  return stats;
}

void advance_learners(Population& pop, std::uint64_t episode) {
  for (TeamModel& team : pop.teams()) team.schedule.advance(episode);
}

}  // namespace marl::algo
