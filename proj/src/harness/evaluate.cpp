#include "marl/harness/evaluate.hpp"

#include "marl/algo/trainer.hpp"
#include "marl/common/errors.hpp"

namespace marl::harness {

std::vector<std::vector<double>> rollout_returns(const algo::Population& pop,
                                                 const env::EnvConfig& env_config,
                                                 std::size_t episodes, std::uint64_t seed) {
  env::EnvConfig cfg = env_config;
  cfg.seed = seed;
  env::ParticleWorld world(cfg);
  if (world.agent_count() != pop.agent_count()) {
    throw ConfigError("evaluate: population does not match the scenario's agent count");
  }
  std::vector<std::vector<double>> out;
  out.reserve(episodes);
  for (std::size_t e = 0; e < episodes; ++e) {
    std::vector<std::vector<double>> obs = world.reset();
    std::vector<double> ret(world.agent_count(), 0.0);
    for (bool done = false; !done;) {
      const auto actions = algo::select_actions(pop, obs, algo::ActionMode::kExploit);
      env::StepResult r = world.step(actions);
      for (std::size_t i = 0; i < ret.size(); ++i) ret[i] += r.rewards[i];
      obs = std::move(r.observations);
      done = r.done;
    }
    out.push_back(std::move(ret));
  }
  return out;
}

std::vector<double> evaluate(const algo::Population& pop, const env::EnvConfig& env_config,
                             std::size_t episodes, std::uint64_t seed) {
  const auto returns = rollout_returns(pop, env_config, episodes, seed);
  std::vector<double> mean(pop.agent_count(), 0.0);
  for (const auto& r : returns) {
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += r[i];
  }
  if (!returns.empty()) {
    for (double& m : mean) m /= static_cast<double>(returns.size());
  }
  return mean;
}

}  // namespace marl::harness
