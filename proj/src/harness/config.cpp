#include "marl/harness/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "marl/common/errors.hpp"

namespace marl::harness {

using nlohmann::json;

Profile parse_profile(std::string_view name) {
  if (name == "paper") return Profile::kPaper;
  if (name == "desk") return Profile::kDesk;
  throw ConfigError("unknown profile '" + std::string(name) + "' (expected paper or desk)");
}

RunConfig paper_profile() { return RunConfig{}; }

RunConfig desk_profile() {
  RunConfig c;
  c.episodes = 5000;
  c.k = 250;
  c.batch = 256;
  c.eval_every = 50;
  c.probe_every = 125;
  c.out_dir = "runs/desk";
  return c;
}

RunConfig profile(Profile p) { return p == Profile::kPaper ? paper_profile() : desk_profile(); }

void validate(const RunConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid config: ") + what);
  };
  require(c.episodes > 0, "episodes must be positive");
  require(c.steps > 0, "steps must be positive");
  require(c.k > 0, "k must be positive");
  require(c.k <= c.episodes, "k must not exceed episodes");
  require(c.tau > 0.0 && c.tau <= 1.0, "tau must lie in (0, 1]");
  require(c.gamma >= 0.0 && c.gamma <= 1.0, "gamma must lie in [0, 1]");
  require(c.batch > 0, "batch must be positive");
  require(c.buffer_capacity >= c.batch, "buffer capacity must hold at least one batch");
  require(c.warmup >= c.batch, "warmup must be at least one batch");
  require(c.actor_lr > 0.0 && c.critic_lr > 0.0, "learning rates must be positive");
  require(c.sigma >= 0.0, "sigma must be non-negative");
  require(c.hidden > 0, "hidden width must be positive");
  require(c.eval_every == 0 || c.eval_episodes > 0, "eval_episodes must be positive");
  require(c.probe_every == 0 || c.probe_steps > 0, "probe_steps must be positive");
  require(!c.prey_algorithm || env::is_predator_prey(c.scenario),
          "prey_algo applies to predator-prey scenarios only");
}

void apply_json(RunConfig& c, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "scenario") c.scenario = env::parse_scenario(v.get<std::string>());
      else if (key == "algo") c.algorithm = algo::parse_algorithm(v.get<std::string>());
      else if (key == "prey_algo") c.prey_algorithm = algo::parse_algorithm(v.get<std::string>());
      else if (key == "episodes") c.episodes = v.get<std::uint64_t>();
      else if (key == "steps") c.steps = v.get<int>();
      else if (key == "k") c.k = v.get<std::uint64_t>();
      else if (key == "tau") c.tau = v.get<double>();
      else if (key == "gamma") c.gamma = v.get<double>();
      else if (key == "batch") c.batch = v.get<std::size_t>();
      else if (key == "buffer") c.buffer_capacity = v.get<std::size_t>();
      else if (key == "warmup") c.warmup = v.get<std::size_t>();
      else if (key == "actor_lr") c.actor_lr = v.get<double>();
      else if (key == "critic_lr") c.critic_lr = v.get<double>();
      else if (key == "sigma") c.sigma = v.get<double>();
      else if (key == "hidden") c.hidden = v.get<std::size_t>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "fixed_targets")
        c.fixed_targets = algo::parse_fixed_target_inputs(v.get<std::string>());
      else if (key == "out") c.out_dir = v.get<std::string>();
      else if (key == "eval_every") c.eval_every = v.get<std::uint64_t>();
      else if (key == "eval_episodes") c.eval_episodes = v.get<std::size_t>();
      else if (key == "probe_every") c.probe_every = v.get<std::uint64_t>();
      else if (key == "probe_steps") c.probe_steps = v.get<std::size_t>();
      else if (key == "checkpoint_every") c.checkpoint_every = v.get<std::uint64_t>();
      else if (key == "profile") continue;  // consumed by the CLI before overlaying
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
}

void apply_config_file(RunConfig& c, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_json(c, ss.str());
}

std::string to_json(const RunConfig& c) {
  json j;
  j["scenario"] = std::string(env::scenario_name(c.scenario));
  j["algo"] = std::string(algo::algorithm_name(c.algorithm));
  if (c.prey_algorithm) j["prey_algo"] = std::string(algo::algorithm_name(*c.prey_algorithm));
  j["episodes"] = c.episodes;
  j["steps"] = c.steps;
  j["k"] = c.k;
  j["tau"] = c.tau;
  j["gamma"] = c.gamma;
  j["batch"] = c.batch;
  j["buffer"] = c.buffer_capacity;
  j["warmup"] = c.warmup;
  j["actor_lr"] = c.actor_lr;
  j["critic_lr"] = c.critic_lr;
  j["sigma"] = c.sigma;
  j["hidden"] = c.hidden;
  j["seed"] = c.seed;
  j["fixed_targets"] = std::string(algo::fixed_target_inputs_name(c.fixed_targets));
  j["out"] = c.out_dir.string();
  j["eval_every"] = c.eval_every;
  j["eval_episodes"] = c.eval_episodes;
  j["probe_every"] = c.probe_every;
  j["probe_steps"] = c.probe_steps;
  j["checkpoint_every"] = c.checkpoint_every;
  return j.dump(2);
}

env::EnvConfig env_config(const RunConfig& c) {
  env::EnvConfig e;
  e.scenario = c.scenario;
  e.episode_length = c.steps;
  e.seed = derive_seed(c.seed, 1);
  return e;
}

algo::PopulationSpec population_spec(const RunConfig& c, const env::ParticleWorld& world) {
  algo::PopulationSpec spec = algo::spec_for_world(world, c.algorithm);
  if (c.prey_algorithm) spec.team_algorithms[env::Team::kPrey] = *c.prey_algorithm;
  spec.hidden = c.hidden;
  spec.actor_opt.learning_rate = c.actor_lr;
  spec.critic_opt.learning_rate = c.critic_lr;
  spec.learner_period = c.k;
  return spec;
}

}  // namespace marl::harness
