#include "marl/harness/bench.hpp"

#include <algorithm>
#include <chrono>

#include "marl/algo/noise.hpp"
#include "marl/algo/trainer.hpp"
#include "marl/common/errors.hpp"
#include "marl/harness/csv.hpp"
#include "marl/harness/session.hpp"

namespace marl::harness {
namespace {

using Clock = std::chrono::steady_clock;

// Keeps results observable so the timed work cannot be optimised away.
volatile double g_sink = 0.0;

struct Runner {
  const algo::Population* pop;
  env::ParticleWorld world;
  algo::GaussianNoise noise;
  std::vector<std::vector<double>> obs;

  Runner(const algo::Population& p, const env::EnvConfig& cfg, double sigma, std::uint64_t seed)
      : pop(&p), world(cfg), noise(sigma, seed), obs(world.reset()) {}

  double run(std::uint64_t steps) {
    const auto t0 = Clock::now();
    for (std::uint64_t s = 0; s < steps; ++s) {
      const auto actions = algo::select_actions(*pop, obs, algo::ActionMode::kExplore, &noise);
      env::StepResult r = world.step(actions);
      g_sink = g_sink + r.rewards[0];
      obs = r.done ? world.reset() : std::move(r.observations);
    }
    return std::chrono::duration<double>(Clock::now() - t0).count();
  }
};

// Alternates blocks of `block` units between two timed callables until both
// have covered `total` units and `min_seconds`, doubling the window as needed.
template <typename A, typename B>
std::pair<double, std::uint64_t> alternate(A&& a, B&& b, std::uint64_t total, std::uint64_t block,
                                           double min_seconds, double& b_seconds) {
  double a_seconds = 0.0;
  b_seconds = 0.0;
  std::uint64_t done = 0;
  std::uint64_t target = total;
  while (true) {
    while (done < target) {
      const std::uint64_t n = std::min(block, target - done);
      a_seconds += a(n);
      b_seconds += b(n);
      done += n;
    }
    if (std::min(a_seconds, b_seconds) >= min_seconds) break;
    target *= 2;
  }
  return {a_seconds, done};
}

}  // namespace

void write_timing_csv(const std::filesystem::path& path, const std::vector<TimingReport>& rows) {
  CsvWriter out(path, kTimingCsvHeader);
  for (const TimingReport& r : rows) {
    out.write_row({r.phase, r.algo, r.scenario, r.layout, format_double(r.mean_seconds),
                   std::to_string(r.samples)});
  }
}

std::pair<algo::Population, algo::Population> twin_populations(const algo::PopulationSpec& spec,
                                                                std::uint64_t seed) {
  algo::PopulationSpec unified_spec = spec;
  unified_spec.algorithm = algo::Algorithm::kIuur;
  unified_spec.team_algorithms.clear();
  algo::PopulationSpec per_agent_spec = spec;
  per_agent_spec.algorithm = algo::Algorithm::kMaddpg;
  per_agent_spec.team_algorithms.clear();

  Rng rng(seed);
  algo::Population unified(unified_spec, rng);
  algo::Population per_agent(per_agent_spec, rng);
  for (std::size_t t = 0; t < unified.teams().size(); ++t) {
    for (algo::ActorCritic& ac : per_agent.teams()[t].nets) {
      ac.actor = unified.teams()[t].nets.front().actor;
      ac.target_actor = ac.actor;
    }
  }
  return {std::move(per_agent), std::move(unified)};
}

TimingPair bench_interaction(env::Scenario scenario, std::uint64_t steps, std::uint64_t seed,
                             std::uint64_t warmup_steps, double min_seconds) {
  if (steps == 0) throw ConfigError("bench_interaction: steps must be positive");
  env::EnvConfig cfg;
  cfg.scenario = scenario;
  cfg.seed = derive_seed(seed, 1);
  const env::ParticleWorld probe_world(cfg);
  auto [per_agent, unified] =
      twin_populations(algo::spec_for_world(probe_world, algo::Algorithm::kIuur), seed);

  const double sigma = RunConfig{}.sigma;
  Runner base(per_agent, cfg, sigma, derive_seed(seed, 2));
  Runner cand(unified, cfg, sigma, derive_seed(seed, 2));
  base.run(warmup_steps);
  cand.run(warmup_steps);

  double cand_seconds = 0.0;
  const auto [base_seconds, measured] = alternate([&](std::uint64_t n) { return base.run(n); },
                                                  [&](std::uint64_t n) { return cand.run(n); },
                                                  steps, 1000, min_seconds, cand_seconds);
  const std::string name(env::scenario_name(scenario));
  TimingPair out;
  out.baseline = {"interaction", "maddpg", name, "per_agent",
                  base_seconds / static_cast<double>(measured), measured};
  out.candidate = {"interaction", "iuur", name, "unified",
                   cand_seconds / static_cast<double>(measured), measured};
  return out;
}

TimingPair bench_action_selection(const algo::Population& baseline,
                                  const algo::Population& candidate,
                                  const std::vector<std::vector<double>>& observations,
                                  std::uint64_t calls, double min_seconds) {
  auto timed = [&](const algo::Population& pop) {
    return [&pop, &observations](std::uint64_t n) {
      const auto t0 = Clock::now();
      for (std::uint64_t i = 0; i < n; ++i) {
        const auto a = algo::select_actions(pop, observations, algo::ActionMode::kExploit);
        g_sink = g_sink + a[0][0];
      }
      return std::chrono::duration<double>(Clock::now() - t0).count();
    };
  };
  auto a = timed(baseline);
  auto b = timed(candidate);
  a(100);
  b(100);
  double cand_seconds = 0.0;
  const auto [base_seconds, measured] = alternate(a, b, calls, 1000, min_seconds, cand_seconds);
  TimingPair out;
  out.baseline = {"interaction", "", "", "baseline", base_seconds / static_cast<double>(measured),
                  measured};
  out.candidate = {"interaction", "", "", "candidate",
                   cand_seconds / static_cast<double>(measured), measured};
  return out;
}

TimingPair bench_training(const RunConfig& baseline, const RunConfig& candidate) {
  if (baseline.episodes != candidate.episodes) {
    throw ConfigError("bench_training: both configurations need the same episode count");
  }
  TrainingSession base(baseline);
  TrainingSession cand(candidate);
  auto timed = [](TrainingSession& s) {
    return [&s](std::uint64_t n) {
      const auto t0 = Clock::now();
      for (std::uint64_t i = 0; i < n; ++i) s.run_episode();
      return std::chrono::duration<double>(Clock::now() - t0).count();
    };
  };
  const std::uint64_t block = std::max<std::uint64_t>(1, baseline.episodes / 20);
  double cand_seconds = 0.0;
  // min_seconds = 0: the episode count is fixed by the configurations.
  const auto [base_seconds, measured] =
      alternate(timed(base), timed(cand), baseline.episodes, block, 0.0, cand_seconds);
  auto report = [&](const RunConfig& c, double seconds) {
    return TimingReport{"training", std::string(algo::algorithm_name(c.algorithm)),
                        std::string(env::scenario_name(c.scenario)),
                        std::string(algo::layout_name(algo::layout_for(c.algorithm))),
                        seconds / static_cast<double>(measured), measured};
  };
  return {report(baseline, base_seconds), report(candidate, cand_seconds)};
}

}  // namespace marl::harness
