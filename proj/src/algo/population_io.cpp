#include "marl/algo/population_io.hpp"

#include <fstream>

#include "json.hpp"
#include "marl/common/errors.hpp"
#include "marl/nn/checkpoint.hpp"

namespace marl::algo {
namespace {

using nlohmann::json;

constexpr int kManifestVersion = 1;
constexpr const char* kNetNames[] = {"actor", "critic", "target_actor", "target_critic"};

env::Team parse_team(const std::string& name) {
  for (env::Team t : {env::Team::kCooperator, env::Team::kPredator, env::Team::kPrey}) {
    if (env::team_name(t) == name) return t;
  }
  throw ConfigError("manifest: unknown team '" + name + "'");
}

json adam_json(const nn::AdamConfig& c) {
  return {{"learning_rate", c.learning_rate}, {"beta1", c.beta1}, {"beta2", c.beta2},
          {"epsilon", c.epsilon}};
}

nn::AdamConfig adam_from(const json& j) {
  nn::AdamConfig c;
  c.learning_rate = j.at("learning_rate").get<double>();
  c.beta1 = j.at("beta1").get<double>();
  c.beta2 = j.at("beta2").get<double>();
  c.epsilon = j.at("epsilon").get<double>();
  return c;
}

std::string net_file(std::size_t team, std::size_t copy, const char* role) {
  return "team" + std::to_string(team) + "_net" + std::to_string(copy) + "_" + role + ".mlp";
}

}  // namespace

void save_population(const std::filesystem::path& dir, const Population& pop,
                     env::Scenario scenario, int episode_length) {
  std::filesystem::create_directories(dir);
  const PopulationSpec& spec = pop.spec();
  json m;
  m["version"] = kManifestVersion;
  m["scenario"] = std::string(env::scenario_name(scenario));
  m["episode_length"] = episode_length;
  m["state_dim"] = spec.state_dim;
  m["obs_dims"] = spec.obs_dims;
  m["action_dim"] = spec.action_dim;
  m["hidden"] = spec.hidden;
  m["learner_period"] = spec.learner_period;
  m["actor_opt"] = adam_json(spec.actor_opt);
  m["critic_opt"] = adam_json(spec.critic_opt);
  json agent_teams = json::array();
  for (env::Team t : spec.agent_teams) agent_teams.push_back(std::string(env::team_name(t)));
  m["agent_teams"] = agent_teams;

  json teams = json::array();
  for (std::size_t t = 0; t < pop.teams().size(); ++t) {
    const TeamModel& team = pop.teams()[t];
    json jt;
    jt["team"] = std::string(env::team_name(team.team));
    jt["algorithm"] = std::string(algorithm_name(team.algorithm));
    jt["layout"] = std::string(layout_name(team.layout()));
    jt["agents"] = team.agents;
    jt["learner"] = team.schedule.learner();
    json nets = json::array();
    for (std::size_t c = 0; c < team.nets.size(); ++c) {
      const ActorCritic& ac = team.nets[c];
      const nn::Mlp* parts[] = {&ac.actor, &ac.critic, &ac.target_actor, &ac.target_critic};
      json jn;
      for (std::size_t k = 0; k < 4; ++k) {
        const std::string file = net_file(t, c, kNetNames[k]);
        nn::save_mlp(dir / file, *parts[k]);
        jn[kNetNames[k]] = file;
      }
      nets.push_back(jn);
    }
    jt["nets"] = nets;
    teams.push_back(jt);
  }
  m["teams"] = teams;

  std::ofstream out(dir / "manifest.json");
  if (!out) throw ConfigError("cannot write " + (dir / "manifest.json").string());
  out << m.dump(2) << '\n';
}

PopulationCheckpoint load_population(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw ConfigError("cannot read " + (dir / "manifest.json").string());
  json m;
  try {
    m = json::parse(in);
    if (m.at("version").get<int>() != kManifestVersion) {
      throw ConfigError("manifest: unsupported version");
    }
    PopulationSpec spec;
    spec.state_dim = m.at("state_dim").get<std::size_t>();
    spec.obs_dims = m.at("obs_dims").get<std::vector<std::size_t>>();
    spec.action_dim = m.at("action_dim").get<std::size_t>();
    spec.hidden = m.at("hidden").get<std::size_t>();
    spec.learner_period = m.at("learner_period").get<std::uint64_t>();
    spec.actor_opt = adam_from(m.at("actor_opt"));
    spec.critic_opt = adam_from(m.at("critic_opt"));
    for (const auto& t : m.at("agent_teams")) spec.agent_teams.push_back(parse_team(t.get<std::string>()));

    std::vector<TeamModel> teams;
    for (const auto& jt : m.at("teams")) {
      TeamModel team;
      team.team = parse_team(jt.at("team").get<std::string>());
      team.algorithm = parse_algorithm(jt.at("algorithm").get<std::string>());
      spec.team_algorithms[team.team] = team.algorithm;
      team.agents = jt.at("agents").get<std::vector<std::size_t>>();
      team.schedule = LearnerSchedule(team.size(), spec.learner_period,
                                      jt.at("learner").get<std::size_t>());
      for (const auto& jn : jt.at("nets")) {
        ActorCritic ac;
        ac.actor = nn::load_mlp(dir / jn.at("actor").get<std::string>());
        ac.critic = nn::load_mlp(dir / jn.at("critic").get<std::string>());
        ac.target_actor = nn::load_mlp(dir / jn.at("target_actor").get<std::string>());
        ac.target_critic = nn::load_mlp(dir / jn.at("target_critic").get<std::string>());
        ac.actor_opt = nn::Adam(ac.actor.parameter_count(), spec.actor_opt);
        ac.critic_opt = nn::Adam(ac.critic.parameter_count(), spec.critic_opt);
        team.nets.push_back(std::move(ac));
      }
      teams.push_back(std::move(team));
    }
    if (!teams.empty()) spec.algorithm = teams.front().algorithm;

    PopulationCheckpoint cp;
    cp.scenario = env::parse_scenario(m.at("scenario").get<std::string>());
    cp.episode_length = m.at("episode_length").get<int>();
    cp.population = Population(std::move(spec), std::move(teams));
    return cp;
  } catch (const json::exception& e) {
    throw ConfigError("manifest " + (dir / "manifest.json").string() + ": " + e.what());
  }
}

}  // namespace marl::algo
