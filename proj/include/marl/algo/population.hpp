#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string_view>
#include <utility>
#include <vector>

#include "marl/algo/schedule.hpp"
#include "marl/common/rng.hpp"
#include "marl/env/particle_world.hpp"
#include "marl/nn/adam.hpp"
#include "marl/nn/mlp.hpp"

namespace marl::algo {

enum class Algorithm { kMaddpg, kIu, kIuur };

std::string_view algorithm_name(Algorithm a);  // "maddpg", "iu", "iuur"
Algorithm parse_algorithm(std::string_view name);

enum class Layout {
  kPerAgent,  // one actor/critic pair per agent (MADDPG, IU)
  kUnified,   // one shared actor/critic pair per team (IUUR)
};

std::string_view layout_name(Layout l);
inline Layout layout_for(Algorithm a) {
  return a == Algorithm::kIuur ? Layout::kUnified : Layout::kPerAgent;
}

struct ActorCritic {
  nn::Mlp actor;
  nn::Mlp critic;
  nn::Mlp target_actor;
  nn::Mlp target_critic;
  nn::Adam actor_opt;
  nn::Adam critic_opt;

  std::size_t parameter_count() const {
    return actor.parameter_count() + critic.parameter_count() + target_actor.parameter_count() +
           target_critic.parameter_count();
  }
  friend bool operator==(const ActorCritic&, const ActorCritic&) = default;
};

struct TeamModel {
  env::Team team = env::Team::kNone;
  Algorithm algorithm = Algorithm::kMaddpg;
  std::vector<std::size_t> agents;  // global agent indices, ascending
  std::vector<ActorCritic> nets;    // one per member, or exactly one when unified
  LearnerSchedule schedule;

  Layout layout() const { return layout_for(algorithm); }
  std::size_t size() const { return agents.size(); }
  ActorCritic& nets_of(std::size_t member) {
    return layout() == Layout::kUnified ? nets.front() : nets.at(member);
  }
  const ActorCritic& nets_of(std::size_t member) const {
    return layout() == Layout::kUnified ? nets.front() : nets.at(member);
  }
  // Members other than the current learner, in member order.
  std::vector<std::size_t> waiting() const;
};

struct PopulationSpec {
  std::size_t state_dim = 0;
  std::vector<std::size_t> obs_dims;    // per agent
  std::vector<env::Team> agent_teams;   // per agent
  std::size_t action_dim = env::kActionDim;
  Algorithm algorithm = Algorithm::kIuur;
  std::map<env::Team, Algorithm> team_algorithms;  // overrides `algorithm` per team
  std::size_t hidden = nn::kDefaultHidden;
  nn::AdamConfig actor_opt;
  nn::AdamConfig critic_opt;
  std::uint64_t learner_period = 5000;

  std::size_t agent_count() const { return obs_dims.size(); }
  Algorithm algorithm_for(env::Team t) const {
    const auto it = team_algorithms.find(t);
    return it == team_algorithms.end() ? algorithm : it->second;
  }
};

// Spec with the dimensions and team map of `world`.
PopulationSpec spec_for_world(const env::ParticleWorld& world, Algorithm algorithm);

// All networks of a run, grouped by team. Teams appear in order of their
// first agent.
class Population {
 public:
  Population() = default;
  // Online networks are drawn from `rng`; targets start as exact copies.
  Population(PopulationSpec spec, Rng& rng);
  // Networks supplied by the caller (checkpoint loading).
  Population(PopulationSpec spec, std::vector<TeamModel> teams);

  const PopulationSpec& spec() const { return spec_; }
  std::vector<TeamModel>& teams() { return teams_; }
  const std::vector<TeamModel>& teams() const { return teams_; }
  std::size_t agent_count() const { return spec_.agent_count(); }

  // (team index, member index) of a global agent index.
  std::pair<std::size_t, std::size_t> locate(std::size_t agent) const;

  // Critic input width: |s| + sum |a_j| per agent, plus |o_i| when unified.
  std::size_t critic_input_dim(const TeamModel& team) const;
  // Every network held, online and target.
  std::size_t parameter_count() const;

 private:
  void index_agents();

  PopulationSpec spec_;
  std::vector<TeamModel> teams_;
  std::vector<std::pair<std::size_t, std::size_t>> where_;
};

}  // namespace marl::algo
