#include "marl/algo/population.hpp"

#include <algorithm>
#include <string>

#include "marl/common/errors.hpp"

namespace marl::algo {

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kMaddpg: return "maddpg";
    case Algorithm::kIu: return "iu";
    case Algorithm::kIuur: return "iuur";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kMaddpg, Algorithm::kIu, Algorithm::kIuur}) {
    if (algorithm_name(a) == name) return a;
  }
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

std::string_view layout_name(Layout l) {
  return l == Layout::kUnified ? "unified" : "per_agent";
}

std::vector<std::size_t> TeamModel::waiting() const {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < size(); ++m) {
    if (m != schedule.learner_index()) out.push_back(m);
  }
  return out;
}

PopulationSpec spec_for_world(const env::ParticleWorld& world, Algorithm algorithm) {
  PopulationSpec spec;
  spec.state_dim = world.state_dim();
  spec.obs_dims.assign(world.agent_count(), world.observation_dim());
  for (std::size_t i = 0; i < world.agent_count(); ++i) spec.agent_teams.push_back(world.team_of(i));
  spec.algorithm = algorithm;
  return spec;
}

Population::Population(PopulationSpec spec, Rng& rng) : spec_(std::move(spec)) {
  if (spec_.agent_teams.size() != spec_.agent_count() || spec_.agent_count() == 0) {
    throw ConfigError("population spec: one team tag and observation size per agent required");
  }
  for (std::size_t i = 0; i < spec_.agent_count(); ++i) {
    const env::Team t = spec_.agent_teams[i];
    auto it = std::find_if(teams_.begin(), teams_.end(),
                           [t](const TeamModel& m) { return m.team == t; });
    if (it == teams_.end()) {
      TeamModel m;
      m.team = t;
      m.algorithm = spec_.algorithm_for(t);
      teams_.push_back(std::move(m));
      it = teams_.end() - 1;
    }
    it->agents.push_back(i);
  }
  for (TeamModel& team : teams_) {
    team.schedule = LearnerSchedule(team.size(), spec_.learner_period);
    const std::size_t obs_dim = spec_.obs_dims[team.agents.front()];
    if (team.layout() == Layout::kUnified) {
      for (std::size_t a : team.agents) {
        if (spec_.obs_dims[a] != obs_dim) {
          throw ConfigError("unified representation needs equal observation sizes within a team");
        }
      }
    }
    const std::size_t copies = team.layout() == Layout::kUnified ? 1 : team.size();
    for (std::size_t c = 0; c < copies; ++c) {
      const std::size_t in = spec_.obs_dims[team.agents[c]];
      ActorCritic ac;
      ac.actor = nn::Mlp::two_hidden(in, spec_.action_dim, nn::OutputActivation::kTanh, spec_.hidden);
      ac.critic = nn::Mlp::two_hidden(critic_input_dim(team), 1, nn::OutputActivation::kIdentity,
                                      spec_.hidden);
      ac.actor.init_uniform(rng);
      ac.critic.init_uniform(rng);
      ac.target_actor = ac.actor;
      ac.target_critic = ac.critic;
      ac.actor_opt = nn::Adam(ac.actor.parameter_count(), spec_.actor_opt);
      ac.critic_opt = nn::Adam(ac.critic.parameter_count(), spec_.critic_opt);
      team.nets.push_back(std::move(ac));
    }
  }
  index_agents();
}

Population::Population(PopulationSpec spec, std::vector<TeamModel> teams)
    : spec_(std::move(spec)), teams_(std::move(teams)) {
  for (const TeamModel& team : teams_) {
    const std::size_t expected = team.layout() == Layout::kUnified ? 1 : team.size();
    if (team.nets.size() != expected) throw ConfigError("team network count does not match layout");
    for (const ActorCritic& ac : team.nets) {
      if (ac.critic.input_dim() != critic_input_dim(team)) {
        throw ConfigError("critic input size does not match the population spec");
      }
    }
  }
  index_agents();
}

void Population::index_agents() {
  where_.assign(spec_.agent_count(), {0, 0});
  std::vector<bool> seen(spec_.agent_count(), false);
  for (std::size_t t = 0; t < teams_.size(); ++t) {
    for (std::size_t m = 0; m < teams_[t].agents.size(); ++m) {
      const std::size_t a = teams_[t].agents[m];
      if (a >= spec_.agent_count() || seen[a]) throw ConfigError("invalid team membership");
      seen[a] = true;
      where_[a] = {t, m};
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw ConfigError("every agent must belong to exactly one team");
  }
}

std::pair<std::size_t, std::size_t> Population::locate(std::size_t agent) const {
  return where_.at(agent);
}

std::size_t Population::critic_input_dim(const TeamModel& team) const {
  std::size_t dim = spec_.state_dim + spec_.agent_count() * spec_.action_dim;
  if (team.layout() == Layout::kUnified) dim += spec_.obs_dims[team.agents.front()];
  return dim;
}

std::size_t Population::parameter_count() const {
  std::size_t n = 0;
  for (const TeamModel& team : teams_) {
    for (const ActorCritic& ac : team.nets) n += ac.parameter_count();
  }
  return n;
}

}  // namespace marl::algo
