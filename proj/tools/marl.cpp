// Command-line entry point: train, eval, bench-interaction, bench-training.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "marl/algo/population_io.hpp"
#include "marl/common/errors.hpp"
#include "marl/harness/bench.hpp"
#include "marl/harness/config.hpp"
#include "marl/harness/csv.hpp"
#include "marl/harness/evaluate.hpp"
#include "marl/harness/session.hpp"

namespace {

using marl::harness::RunConfig;

// Flags left unset fall through to the config file, then to the profile.
struct RunFlags {
  std::string profile = "desk";
  std::optional<std::string> config;
  std::optional<std::string> scenario, algo, prey_algo, out, fixed_targets;
  std::optional<std::uint64_t> episodes, k, seed, eval_every, probe_every, checkpoint_every;
  std::optional<int> steps;
  std::optional<double> tau, gamma, sigma, actor_lr, critic_lr;
  std::optional<std::size_t> batch, buffer, warmup, hidden, eval_episodes, probe_steps;

  void attach(CLI::App* app) {
    app->add_option("--profile", profile, "Default settings: paper or desk")
        ->check(CLI::IsMember({"paper", "desk"}));
    app->add_option("--config", config, "JSON file with any of the flag values");
    app->add_option("--scenario", scenario, "spread3 | spread10 | pp3v1 | pp6v2");
    app->add_option("--algo", algo, "maddpg | iu | iuur");
    app->add_option("--prey-algo", prey_algo, "Algorithm of the prey team (predator-prey only)");
    app->add_option("--episodes", episodes, "Training episodes M");
    app->add_option("--steps", steps, "Steps per episode T");
    app->add_option("--k", k, "Learner period K in episodes");
    app->add_option("--tau", tau, "Soft target update rate");
    app->add_option("--gamma", gamma, "Discount factor");
    app->add_option("--batch", batch, "Batch size B");
    app->add_option("--buffer", buffer, "Replay capacity");
    app->add_option("--warmup", warmup, "Transitions stored before the first update");
    app->add_option("--actor-lr", actor_lr, "Actor learning rate");
    app->add_option("--critic-lr", critic_lr, "Critic learning rate");
    app->add_option("--sigma", sigma, "Exploration noise std");
    app->add_option("--hidden", hidden, "Hidden layer width");
    app->add_option("--seed", seed, "Run seed");
    app->add_option("--fixed-targets", fixed_targets,
                    "Step read by waiting members' fixed targets: next | current")
        ->check(CLI::IsMember({"next", "current"}));
    app->add_option("--out", out, "Output directory");
    app->add_option("--eval-every", eval_every, "Evaluation cadence in episodes (0 = off)");
    app->add_option("--eval-episodes", eval_episodes, "Noiseless episodes per evaluation");
    app->add_option("--probe-every", probe_every, "Gradient-norm probe cadence (0 = off)");
    app->add_option("--probe-steps", probe_steps, "Critic steps per probe rule");
    app->add_option("--checkpoint-every", checkpoint_every, "Extra checkpoint cadence (0 = final only)");
  }

  RunConfig resolve() const {
    RunConfig c = marl::harness::profile(marl::harness::parse_profile(profile));
    if (config) marl::harness::apply_config_file(c, *config);
    if (scenario) c.scenario = marl::env::parse_scenario(*scenario);
    if (algo) c.algorithm = marl::algo::parse_algorithm(*algo);
    if (prey_algo) c.prey_algorithm = marl::algo::parse_algorithm(*prey_algo);
    if (episodes) c.episodes = *episodes;
    if (steps) c.steps = *steps;
    if (k) c.k = *k;
    if (tau) c.tau = *tau;
    if (gamma) c.gamma = *gamma;
    if (batch) c.batch = *batch;
    if (buffer) c.buffer_capacity = *buffer;
    if (warmup) c.warmup = *warmup;
    if (actor_lr) c.actor_lr = *actor_lr;
    if (critic_lr) c.critic_lr = *critic_lr;
    if (sigma) c.sigma = *sigma;
    if (hidden) c.hidden = *hidden;
    if (seed) c.seed = *seed;
    if (fixed_targets) c.fixed_targets = marl::algo::parse_fixed_target_inputs(*fixed_targets);
    if (out) c.out_dir = *out;
    if (eval_every) c.eval_every = *eval_every;
    if (eval_episodes) c.eval_episodes = *eval_episodes;
    if (probe_every) c.probe_every = *probe_every;
    if (probe_steps) c.probe_steps = *probe_steps;
    if (checkpoint_every) c.checkpoint_every = *checkpoint_every;
    marl::harness::validate(c);
    return c;
  }
};

void print_pair(const marl::harness::TimingPair& p) {
  for (const auto* r : {&p.baseline, &p.candidate}) {
    std::printf("%-11s %-7s %-9s %-10s %.6e s  (%llu samples)\n", r->phase.c_str(), r->algo.c_str(),
                r->scenario.c_str(), r->layout.c_str(), r->mean_seconds,
                static_cast<unsigned long long>(r->samples));
  }
  std::printf("speedup (baseline / candidate): %.3f\n", p.speedup());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-agent actor-critic lab: MADDPG, IU and IUUR on particle worlds"};
  app.require_subcommand(1);

  RunFlags train_flags;
  CLI::App* train = app.add_subcommand("train", "Train a population and log returns");
  train_flags.attach(train);

  std::string checkpoint;
  std::size_t eval_episodes = 10;
  std::uint64_t eval_seed = 0;
  CLI::App* eval = app.add_subcommand("eval", "Noiseless evaluation of a checkpoint");
  eval->add_option("--checkpoint", checkpoint, "Checkpoint directory")->required();
  eval->add_option("--episodes", eval_episodes, "Evaluation episodes");
  eval->add_option("--seed", eval_seed, "Evaluation seed");

  std::string bench_scenario = "spread10";
  std::uint64_t bench_steps = 10000;
  std::uint64_t bench_seed = 0;
  std::optional<std::string> bench_out;
  CLI::App* bi = app.add_subcommand("bench-interaction",
                                    "Per-step interaction time, per-agent vs unified layout");
  bi->add_option("--scenario", bench_scenario, "Scenario id");
  bi->add_option("--steps", bench_steps, "Timed steps per layout (at least 10000)");
  bi->add_option("--seed", bench_seed, "Seed");
  bi->add_option("--timing-csv", bench_out, "Write the timing report here");

  RunFlags bt_flags;
  std::string baseline_algo = "maddpg";
  std::optional<std::string> bt_timing;
  CLI::App* bt = app.add_subcommand(
      "bench-training", "Training time per episode, baseline vs --algo at equal episode counts");
  bt_flags.attach(bt);
  bt->add_option("--baseline", baseline_algo, "Baseline algorithm");
  bt->add_option("--timing-csv", bt_timing, "Write the timing report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      const RunConfig cfg = train_flags.resolve();
      const auto summary = marl::harness::run_training(cfg);
      std::printf("trained %llu episodes in %.1f s; outputs in %s\n",
                  static_cast<unsigned long long>(cfg.episodes), summary.seconds,
                  cfg.out_dir.string().c_str());
      if (!summary.evals.empty()) {
        std::printf("last evaluation (episode %llu): mean return %.4f\n",
                    static_cast<unsigned long long>(summary.evals.back().episode),
                    summary.evals.back().mean());
      }
    } else if (*eval) {
      const auto cp = marl::algo::load_population(checkpoint);
      marl::env::EnvConfig env;
      env.scenario = cp.scenario;
      env.episode_length = cp.episode_length;
      const auto mean = marl::harness::evaluate(cp.population, env, eval_episodes, eval_seed);
      std::printf("agent_id,mean_return\n");
      for (std::size_t i = 0; i < mean.size(); ++i) {
        std::printf("%zu,%s\n", i, marl::harness::format_double(mean[i]).c_str());
      }
    } else if (*bi) {
      if (bench_steps < 10000) throw marl::ConfigError("bench-interaction needs --steps >= 10000");
      const auto pair = marl::harness::bench_interaction(marl::env::parse_scenario(bench_scenario),
                                                         bench_steps, bench_seed);
      print_pair(pair);
      if (bench_out) marl::harness::write_timing_csv(*bench_out, {pair.baseline, pair.candidate});
    } else if (*bt) {
      RunConfig cand = bt_flags.resolve();
      RunConfig base = cand;
      base.algorithm = marl::algo::parse_algorithm(baseline_algo);
      base.prey_algorithm.reset();
      if (cand.prey_algorithm) base.prey_algorithm = cand.prey_algorithm;
      const auto pair = marl::harness::bench_training(base, cand);
      print_pair(pair);
      if (bt_timing) marl::harness::write_timing_csv(*bt_timing, {pair.baseline, pair.candidate});
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
