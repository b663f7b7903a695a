#include "marl/harness/session.hpp"

#include <chrono>
#include <fstream>
#include <numeric>
#include <string>

#include "marl/algo/population_io.hpp"
#include "marl/algo/trainer.hpp"
#include "marl/common/allocator.hpp"
#include "marl/common/errors.hpp"
#include "marl/harness/bench.hpp"
#include "marl/harness/csv.hpp"
#include "marl/harness/evaluate.hpp"

namespace marl::harness {
namespace {

using Clock = std::chrono::steady_clock;

// Random stream tags; see derive_seed.
constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kNoiseStream = 2;
constexpr std::uint64_t kSampleStream = 3;
constexpr std::uint64_t kEvalStream = 4;
constexpr std::uint64_t kProbeStream = 5;

replay::TransitionLayout transition_layout(const env::ParticleWorld& w) {
  replay::TransitionLayout l;
  l.state_dim = w.state_dim();
  l.obs_dims.assign(w.agent_count(), w.observation_dim());
  l.action_dim = env::kActionDim;
  return l;
}

algo::Population make_population(const RunConfig& cfg, const env::ParticleWorld& world) {
  Rng rng(derive_seed(cfg.seed, kInitStream));
  return algo::Population(population_spec(cfg, world), rng);
}

std::string agent_algo(const algo::Population& pop, std::size_t agent) {
  return std::string(algo::algorithm_name(pop.teams()[pop.locate(agent).first].algorithm));
}

}  // namespace

double EvalPoint::mean() const {
  if (mean_returns.empty()) return 0.0;
  return std::accumulate(mean_returns.begin(), mean_returns.end(), 0.0) /
         static_cast<double>(mean_returns.size());
}

TrainingSession::TrainingSession(RunConfig cfg)
    : cfg_((validate(cfg), std::move(cfg))),
      world_(env_config(cfg_)),
      pop_(make_population(cfg_, world_)),
      buffer_(transition_layout(world_), cfg_.buffer_capacity),
      noise_(cfg_.sigma, derive_seed(cfg_.seed, kNoiseStream)),
      sample_rng_(derive_seed(cfg_.seed, kSampleStream)) {
  tune_allocator_for_training();
}

std::vector<double> TrainingSession::run_episode() {
  const std::uint64_t episode = episode_ + 1;
  const algo::UpdateConfig update{cfg_.gamma, cfg_.tau, cfg_.fixed_targets};
  std::vector<std::vector<double>> obs = world_.reset();
  std::vector<double> returns(world_.agent_count(), 0.0);
  replay::Transition tr;
  int step = 0;
  try {
    for (bool done = false; !done; ++step) {
      tr.state = world_.global_state();
      tr.obs = obs;
      const auto t0 = Clock::now();
      const auto actions = algo::select_actions(pop_, obs, algo::ActionMode::kExplore, &noise_);
      env::StepResult r = world_.step(actions);
      interaction_seconds_ += std::chrono::duration<double>(Clock::now() - t0).count();
      ++interaction_steps_;

      tr.actions.assign(actions.size(), {});
      for (std::size_t i = 0; i < actions.size(); ++i) {
        tr.actions[i].assign(actions[i].begin(), actions[i].end());
      }
      tr.rewards = r.rewards;
      tr.next_state = world_.global_state();
      tr.next_obs = r.observations;
      buffer_.store(tr);
      for (std::size_t i = 0; i < returns.size(); ++i) returns[i] += r.rewards[i];
      obs = std::move(r.observations);
      done = r.done;

      if (buffer_.size() >= cfg_.warmup) {
        const replay::TransitionBatch batch = buffer_.sample(cfg_.batch, sample_rng_);
        algo::update_population(pop_, batch, update);
        ++updates_;
      }
    }
  } catch (const NumericError& e) {
    throw NumericError("episode " + std::to_string(episode) + " step " + std::to_string(step + 1) +
                       ": " + e.what());
  }
  episode_ = episode;
  algo::advance_learners(pop_, episode_);
  return returns;
}

EvalPoint TrainingSession::evaluate_now() const {
  EvalPoint p;
  p.episode = episode_;
  p.mean_returns = evaluate(pop_, world_.config(), cfg_.eval_episodes,
                            derive_seed(cfg_.seed, kEvalStream));
  return p;
}

std::vector<ProbePoint> TrainingSession::probe_now() const {
  std::vector<ProbePoint> out;
  if (buffer_.size() < cfg_.warmup) return out;
  Rng rng(derive_seed(derive_seed(cfg_.seed, kProbeStream), episode_));
  std::vector<replay::TransitionBatch> critic_batches;
  for (std::size_t i = 0; i < cfg_.probe_steps; ++i) {
    critic_batches.push_back(buffer_.sample(cfg_.batch, rng));
  }
  const replay::TransitionBatch eval_batch = buffer_.sample(cfg_.batch, rng);
  for (std::size_t t = 0; t < pop_.teams().size(); ++t) {
    const algo::TeamModel& team = pop_.teams()[t];
    if (team.layout() != algo::Layout::kUnified || team.size() < 2) continue;
    ProbePoint p;
    p.episode = episode_;
    p.team_index = t;
    p.team = team.team;
    p.learner = team.schedule.learner();
    p.result = algo::gradient_norm_probe(pop_, t, critic_batches, eval_batch, cfg_.gamma,
                                          cfg_.fixed_targets);
    out.push_back(p);
  }
  return out;
}

TrainingSummary run_training(const RunConfig& cfg) {
  TrainingSession session(cfg);
  const RunConfig& c = session.config();
  std::filesystem::create_directories(c.out_dir);
  {
    std::ofstream out(c.out_dir / "config.json");
    out << to_json(c) << '\n';
  }
  const std::string scenario(env::scenario_name(c.scenario));
  const std::string seed = std::to_string(c.seed);
  const algo::Population& pop = session.population();
  CsvWriter rewards(c.out_dir / "rewards.csv", kRewardCsvHeader);
  std::optional<CsvWriter> evals;
  if (c.eval_every > 0) evals.emplace(c.out_dir / "eval.csv", kEvalCsvHeader);
  std::optional<CsvWriter> probes;
  if (c.probe_every > 0) probes.emplace(c.out_dir / "probe.csv", kProbeCsvHeader);

  TrainingSummary summary;
  const auto start = Clock::now();
  for (std::uint64_t e = 1; e <= c.episodes; ++e) {
    const std::vector<double> ret = session.run_episode();
    for (std::size_t i = 0; i < ret.size(); ++i) {
      rewards.write_row({std::to_string(e), agent_algo(pop, i), scenario, seed, std::to_string(i),
                         format_double(ret[i])});
    }
    summary.returns.push_back(ret);

    if (evals && e % c.eval_every == 0) {
      EvalPoint p = session.evaluate_now();
      for (std::size_t i = 0; i < p.mean_returns.size(); ++i) {
        evals->write_row({std::to_string(e), agent_algo(pop, i), scenario, seed, std::to_string(i),
                          format_double(p.mean_returns[i])});
      }
      summary.evals.push_back(std::move(p));
    }
    // Probing starts once every team has trained through one learner period.
    if (probes && e % c.probe_every == 0 && e >= c.k) {
      for (ProbePoint& p : session.probe_now()) {
        probes->write_row({std::to_string(e), agent_algo(pop, pop.teams()[p.team_index].agents.front()),
                           scenario, seed, std::string(env::team_name(p.team)),
                           std::to_string(p.learner), format_double(p.result.norm_fixed),
                           format_double(p.result.norm_bellman)});
        summary.probes.push_back(p);
      }
    }
    if (c.write_checkpoint && c.checkpoint_every > 0 && e % c.checkpoint_every == 0 &&
        e != c.episodes) {
      algo::save_population(c.out_dir / ("checkpoint_ep" + std::to_string(e)), pop, c.scenario,
                            c.steps);
    }
  }
  summary.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  summary.interaction_seconds_per_step =
      session.interaction_seconds() / static_cast<double>(session.interaction_steps());

  if (c.write_checkpoint) algo::save_population(c.out_dir / "checkpoint", pop, c.scenario, c.steps);

  const std::string algo_name(algo::algorithm_name(c.algorithm));
  const std::string layout(algo::layout_name(algo::layout_for(c.algorithm)));
  write_timing_csv(c.out_dir / "timing.csv",
                   {TimingReport{"interaction", algo_name, scenario, layout,
                                 summary.interaction_seconds_per_step, session.interaction_steps()},
                    TimingReport{"training", algo_name, scenario, layout,
                                 summary.seconds / static_cast<double>(c.episodes), c.episodes}});
  return summary;
}

}  // namespace marl::harness
