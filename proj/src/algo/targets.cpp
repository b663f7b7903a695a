#include <algorithm>
#include <cstring>
#include <string>
#include <string_view>

#include "marl/algo/trainer.hpp"
#include "marl/common/errors.hpp"

namespace marl::algo {
namespace {

void copy_row(std::span<const double> src, double*& dst) {
  std::memcpy(dst, src.data(), src.size() * sizeof(double));
  dst += src.size();
}

}  // namespace

std::vector<env::Action> select_actions(const Population& pop,
                                        const std::vector<std::vector<double>>& observations,
                                        ActionMode mode, GaussianNoise* noise) {
  const auto& spec = pop.spec();
  if (observations.size() != pop.agent_count()) {
    throw ConfigError("select_actions: expected " + std::to_string(pop.agent_count()) +
                      " observations, got " + std::to_string(observations.size()));
  }
  for (std::size_t i = 0; i < observations.size(); ++i) {
    if (observations[i].size() != spec.obs_dims[i]) {
      throw ConfigError("select_actions: observation " + std::to_string(i) + " has size " +
                        std::to_string(observations[i].size()) + ", expected " +
                        std::to_string(spec.obs_dims[i]));
    }
  }
  std::vector<env::Action> actions(pop.agent_count());
  for (const TeamModel& team : pop.teams()) {
    if (team.layout() == Layout::kUnified) {
      nn::Matrix x(team.size(), spec.obs_dims[team.agents.front()]);
      for (std::size_t m = 0; m < team.size(); ++m) {
        std::copy(observations[team.agents[m]].begin(), observations[team.agents[m]].end(),
                  x.row(m).begin());
      }
      const nn::Matrix y = team.nets.front().actor.forward(x);
      for (std::size_t m = 0; m < team.size(); ++m) {
        actions[team.agents[m]] = {y(m, 0), y(m, 1)};
      }
    } else {
      for (std::size_t m = 0; m < team.size(); ++m) {
        const auto& o = observations[team.agents[m]];
        nn::Matrix x(1, o.size());
        std::copy(o.begin(), o.end(), x.row(0).begin());
        const nn::Matrix y = team.nets[m].actor.forward(x);
        actions[team.agents[m]] = {y(0, 0), y(0, 1)};
      }
    }
  }
  if (mode == ActionMode::kExplore && noise != nullptr) {
    const auto& draws = noise->sample(actions.size());
    for (std::size_t i = 0; i < actions.size(); ++i) {
      for (std::size_t c = 0; c < env::kActionDim; ++c) actions[i][c] += draws[i][c];
    }
  }
  for (auto& a : actions) {
    for (double& c : a) c = std::clamp(c, -1.0, 1.0);
  }
  return actions;
}

std::vector<nn::Matrix> target_actions(const Population& pop, const std::vector<nn::Matrix>& obs) {
  if (obs.size() != pop.agent_count()) throw ConfigError("target actions: one observation block per agent");
  const std::size_t b = obs.front().rows();
  std::vector<nn::Matrix> out(pop.agent_count());
  for (const TeamModel& team : pop.teams()) {
    if (team.layout() == Layout::kUnified) {
      std::vector<const nn::Matrix*> blocks;
      for (std::size_t a : team.agents) blocks.push_back(&obs[a]);
      const nn::Matrix y = team.nets.front().target_actor.forward(nn::vstack(blocks));
      for (std::size_t m = 0; m < team.size(); ++m) {
        nn::Matrix& dst = out[team.agents[m]];
        dst = nn::Matrix(b, y.cols());
        std::memcpy(dst.data(), y.data() + m * b * y.cols(), b * y.cols() * sizeof(double));
      }
    } else {
      for (std::size_t m = 0; m < team.size(); ++m) {
        out[team.agents[m]] = team.nets[m].target_actor.forward(obs[team.agents[m]]);
      }
    }
  }
  return out;
}

std::vector<nn::Matrix> target_next_actions(const Population& pop,
                                            const replay::TransitionBatch& batch) {
  return target_actions(pop, batch.next_obs);
}

nn::Matrix stacked_critic_input(const Population& pop, const TeamModel& team,
                                std::span<const std::size_t> members, const nn::Matrix& state,
                                const std::vector<nn::Matrix>& obs,
                                const std::vector<nn::Matrix>& actions,
                                const nn::Matrix* own_actions) {
  const std::size_t b = state.rows();
  const bool unified = team.layout() == Layout::kUnified;
  const std::size_t n = pop.agent_count();
  if (actions.size() != n) throw ConfigError("critic input: one action block per agent required");
  nn::Matrix x(members.size() * b, pop.critic_input_dim(team));
  for (std::size_t k = 0; k < members.size(); ++k) {
    const std::size_t self = team.agents.at(members[k]);
    for (std::size_t r = 0; r < b; ++r) {
      double* dst = x.row(k * b + r).data();
      copy_row(state.row(r), dst);
      if (unified) copy_row(obs[self].row(r), dst);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == self && own_actions != nullptr) {
          copy_row(own_actions->row(k * b + r), dst);
        } else {
          copy_row(actions[j].row(r), dst);
        }
      }
    }
  }
  return x;
}

namespace {

std::vector<double> target_values_at(const Population& pop, std::size_t team_index,
                                     std::span<const std::size_t> members, const nn::Matrix& state,
                                     const std::vector<nn::Matrix>& obs,
                                     const std::vector<nn::Matrix>& actions) {
  const TeamModel& team = pop.teams().at(team_index);
  std::vector<double> q;
  q.reserve(members.size() * state.rows());
  if (team.layout() == Layout::kUnified) {
    const nn::Matrix x = stacked_critic_input(pop, team, members, state, obs, actions);
    const nn::Matrix y = team.nets.front().target_critic.forward(x);
    q.assign(y.values().begin(), y.values().end());
  } else {
    for (std::size_t m : members) {
      const std::size_t one[] = {m};
      const nn::Matrix x = stacked_critic_input(pop, team, one, state, obs, actions);
      const nn::Matrix y = team.nets.at(m).target_critic.forward(x);
      q.insert(q.end(), y.values().begin(), y.values().end());
    }
  }
  return q;
}

// Q'(s, o_i, mu'(o_1) .. mu'(o_N)) on the transition's own step.
std::vector<double> current_step_values(const Population& pop, std::size_t team_index,
                                        std::span<const std::size_t> members,
                                        const replay::TransitionBatch& batch) {
  return target_values_at(pop, team_index, members, batch.state, batch.obs,
                          target_actions(pop, batch.obs));
}

}  // namespace

std::string_view fixed_target_inputs_name(FixedTargetInputs f) {
  return f == FixedTargetInputs::kCurrentStep ? "current" : "next";
}

FixedTargetInputs parse_fixed_target_inputs(std::string_view name) {
  if (name == "next") return FixedTargetInputs::kNextStep;
  if (name == "current") return FixedTargetInputs::kCurrentStep;
  throw ConfigError("unknown fixed-target inputs '" + std::string(name) + "' (next | current)");
}

std::vector<double> target_values(const Population& pop, std::size_t team_index,
                                  std::span<const std::size_t> members,
                                  const replay::TransitionBatch& batch,
                                  const std::vector<nn::Matrix>& next_actions) {
  return target_values_at(pop, team_index, members, batch.next_state, batch.next_obs, next_actions);
}

std::vector<double> team_targets(const Population& pop, std::size_t team_index,
                                 std::span<const std::size_t> members,
                                 const replay::TransitionBatch& batch,
                                 const std::vector<nn::Matrix>& next_actions, double gamma,
                                 TargetRule rule, FixedTargetInputs fixed) {
  const TeamModel& team = pop.teams().at(team_index);
  const std::size_t b = batch.size();
  auto is_bellman = [&](std::size_t member) {
    return rule == TargetRule::kBellmanAll || member == team.schedule.learner_index();
  };
  std::vector<double> y;
  if (rule == TargetRule::kValueFixing && fixed == FixedTargetInputs::kCurrentStep) {
    std::vector<std::size_t> learner, waiting;
    for (std::size_t m : members) (is_bellman(m) ? learner : waiting).push_back(m);
    const std::vector<double> yl = target_values(pop, team_index, learner, batch, next_actions);
    const std::vector<double> yw = current_step_values(pop, team_index, waiting, batch);
    y.resize(members.size() * b);
    std::size_t li = 0, wi = 0;
    for (std::size_t k = 0; k < members.size(); ++k) {
      const double* src = is_bellman(members[k]) ? yl.data() + b * li++ : yw.data() + b * wi++;
      std::copy(src, src + b, y.begin() + static_cast<std::ptrdiff_t>(k * b));
    }
  } else {
    y = target_values(pop, team_index, members, batch, next_actions);
  }
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (!is_bellman(members[k])) continue;
    const std::size_t agent = team.agents[members[k]];
    for (std::size_t r = 0; r < b; ++r) {
      double& v = y[k * b + r];
      v = batch.rewards(r, agent) + gamma * v;
    }
  }
  return y;
}

std::vector<double> compute_targets_bellman(const Population& pop,
                                            const replay::TransitionBatch& batch,
                                            std::size_t agent, double gamma) {
  const auto [t, m] = pop.locate(agent);
  const std::size_t members[] = {m};
  return team_targets(pop, t, members, batch, target_next_actions(pop, batch), gamma,
                      TargetRule::kBellmanAll);
}

std::vector<double> compute_targets_fixed(const Population& pop,
                                          const replay::TransitionBatch& batch, std::size_t agent,
                                          FixedTargetInputs fixed) {
  const auto [t, m] = pop.locate(agent);
  if (pop.teams()[t].layout() != Layout::kUnified) {
    throw ConfigError("value-fixing targets are defined for the unified layout only");
  }
  const std::size_t members[] = {m};
  if (fixed == FixedTargetInputs::kCurrentStep) return current_step_values(pop, t, members, batch);
  return target_values(pop, t, members, batch, target_next_actions(pop, batch));
}

}  // namespace marl::algo
