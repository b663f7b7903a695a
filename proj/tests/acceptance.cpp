// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. `--only 1,5` restricts the run to the listed criteria.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fixtures.hpp"
#include "marl/algo/trainer.hpp"
#include "marl/harness/bench.hpp"
#include "marl/harness/config.hpp"
#include "marl/harness/session.hpp"
#include "oracles.hpp"

using namespace marl;
using env::Scenario;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- 1: analytical vs finite-difference gradients ----
Verdict gradient_correctness() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(20240601);
  std::uniform_int_distribution<std::size_t> in_dim(1, 24), hid(1, 48), out_dim(1, 4), rows(1, 8);
  double worst = 0.0;
  std::size_t checked = 0;
  const int configs = 120;
  for (int c = 0; c < configs; ++c) {
    const auto act = c % 2 ? nn::OutputActivation::kTanh : nn::OutputActivation::kIdentity;
    nn::Mlp net = nn::Mlp::two_hidden(in_dim(rng), out_dim(rng), act, hid(rng));
    net.init_uniform(rng);
    nn::Matrix x = oracle::random_matrix(rows(rng), net.input_dim(), rng);
    // Central differences are meaningless across a ReLU kink.
    while (oracle::kink_margin(net, x) < 1e-3) x = oracle::random_matrix(x.rows(), x.cols(), rng);
    const nn::Matrix up = oracle::random_matrix(x.rows(), net.output_dim(), rng);
    const nn::Gradients g = net.backward(net.forward_cached(x), up, nn::BackwardMode::kFull);
    const auto p = oracle::check_param_grads(net, x, up, g.params, 1e-5, 1e-6);
    const auto i = oracle::check_input_grads(net, x, up, g.inputs, 1e-5, 1e-6);
    worst = std::max({worst, p.max_rel, i.max_rel});
    checked += p.checked + i.checked;
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-5 && secs < 60.0,
          fmt("max rel err %.2e over %d configs (%zu partials), %.1f s", worst, configs, checked, secs)};
}

// ---- 2: batched vs sequential actions ----
Verdict unified_exactness() {
  double worst = 0.0;
  std::string sizes;
  for (Scenario s : {Scenario::kSpread3, Scenario::kPredatorPrey6v2, Scenario::kSpread10}) {
    const algo::Population pop = fixture::population(s, algo::Algorithm::kIuur, 7);
    const algo::TeamModel& team = pop.teams().front();
    sizes += (sizes.empty() ? "" : ",") + std::to_string(team.size());
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::vector<double>> obs;
      for (std::size_t d : pop.spec().obs_dims) {
        const nn::Matrix m = oracle::random_matrix(1, d, rng, 2.0);
        obs.emplace_back(m.values().begin(), m.values().end());
      }
      const auto batched = algo::select_actions(pop, obs, algo::ActionMode::kExploit);
      for (std::size_t a : team.agents) {
        const auto seq = oracle::forward_row(team.nets.front().actor, obs[a]);
        for (int c = 0; c < 2; ++c) worst = std::max(worst, std::abs(batched[a][c] - seq[c]));
      }
    }
  }
  return {worst <= 1e-12, fmt("max |batched - sequential| = %.2e for N in {%s}", worst, sizes.c_str())};
}

// ---- 3: value-fixing semantics ----
Verdict value_fixing() {
  bool invariant = true, collapse = true, constant = true;
  for (Scenario s : {Scenario::kSpread3, Scenario::kSpread10, Scenario::kPredatorPrey6v2}) {
    algo::Population pop = fixture::population(s, algo::Algorithm::kIuur, 11);
    Rng rng(12);
    for (int trial = 0; trial < 5; ++trial) {
      replay::TransitionBatch batch = fixture::random_batch(pop.spec(), 64, rng);
      algo::TeamModel& team = pop.teams().front();
      std::vector<std::size_t> all(team.size());
      std::iota(all.begin(), all.end(), 0);
      const auto next = algo::target_next_actions(pop, batch);
      const auto y = algo::team_targets(pop, 0, all, batch, next, 0.95, algo::TargetRule::kValueFixing);

      std::vector<std::vector<double>> fixed;
      for (std::size_t m : team.waiting()) {
        fixed.push_back(algo::compute_targets_fixed(pop, batch, team.agents[m]));
      }
      replay::TransitionBatch perturbed = batch;
      std::normal_distribution<double> n(0.0, 50.0);
      for (double& r : perturbed.rewards.values()) r += n(rng);
      std::size_t w = 0;
      for (std::size_t m : team.waiting()) {
        invariant &= algo::compute_targets_fixed(pop, perturbed, team.agents[m]) == fixed[w++];
      }

      for (std::size_t a = 0; a < pop.agent_count(); ++a) {
        const auto y0 = algo::compute_targets_bellman(pop, batch, a, 0.0);
        for (std::size_t r = 0; r < batch.size(); ++r) collapse &= y0[r] == batch.rewards(r, a);
      }

      const auto captured = y;
      algo::update_critic(team.nets.front(),
                          algo::stacked_critic_input(pop, team, all, batch.state, batch.obs, batch.actions),
                          y);
      constant &= y == captured;
      constant &= algo::team_targets(pop, 0, all, batch, algo::target_next_actions(pop, batch), 0.95,
                                     algo::TargetRule::kValueFixing) == captured;
    }
  }
  return {invariant && collapse && constant,
          fmt("reward invariance %s, gamma=0 collapse %s, target constancy %s", invariant ? "exact" : "BROKEN",
              collapse ? "exact" : "BROKEN", constant ? "exact" : "BROKEN")};
}

// ---- 4: IU freezing across learner periods ----
Verdict iu_freezing() {
  harness::RunConfig c = harness::desk_profile();
  c.scenario = Scenario::kSpread3;
  c.algorithm = algo::Algorithm::kIu;
  c.k = 4;
  c.episodes = 12;
  c.batch = c.warmup = 64;
  c.seed = 5;
  harness::TrainingSession s(c);
  bool frozen = true, learner_moved = true;
  std::size_t periods = 0;
  for (int p = 0; p < 3; ++p) {
    const algo::TeamModel& team = s.population().teams().front();
    const std::size_t learner = team.schedule.learner_index();
    const std::vector<algo::ActorCritic> before = team.nets;
    for (std::uint64_t e = 0; e < c.k; ++e) s.run_episode();
    const auto& after = s.population().teams().front().nets;
    for (std::size_t m = 0; m < before.size(); ++m) {
      const bool same = nn::checksum(after[m].actor) == nn::checksum(before[m].actor) &&
                        nn::checksum(after[m].critic) == nn::checksum(before[m].critic) &&
                        nn::checksum(after[m].target_actor) == nn::checksum(before[m].target_actor) &&
                        nn::checksum(after[m].target_critic) == nn::checksum(before[m].target_critic) &&
                        after[m] == before[m];
      if (m == learner) learner_moved &= !same;
      else frozen &= same;
    }
    ++periods;
  }
  return {frozen && learner_moved,
          fmt("%zu periods of K=%llu: waiting agents %s, learner %s", periods,
              static_cast<unsigned long long>(c.k), frozen ? "bit-identical" : "CHANGED",
              learner_moved ? "updated" : "NOT updated")};
}

// ---- 5: learner schedule ----
Verdict schedule() {
  algo::LearnerSchedule s(3, 2);
  std::string seq;
  std::vector<std::size_t> got;
  for (std::uint64_t e = 1; e <= 12; ++e) {
    got.push_back(s.learner());
    seq += (seq.empty() ? "" : ",") + std::to_string(s.learner());
    s.advance(e);
  }
  const std::vector<std::size_t> want{1, 1, 2, 2, 3, 3, 1, 1, 2, 2, 3, 3};
  return {got == want, "sequence " + seq};
}

// ---- 6 and 9: desk-profile IUUR runs on spread3 ----
struct DeskRun {
  harness::TrainingSummary summary;
  double first = 0.0;  // mean eval return, first 10% of episodes
  double last = 0.0;   // mean eval return, final 10% of episodes
};

std::vector<DeskRun>& desk_runs(const std::filesystem::path& root) {
  static std::vector<DeskRun> runs;
  if (!runs.empty()) return runs;
  for (std::uint64_t seed : {1, 2, 3}) {
    harness::RunConfig c = harness::desk_profile();
    c.scenario = Scenario::kSpread3;
    c.algorithm = algo::Algorithm::kIuur;
    c.seed = seed;
    c.out_dir = root / ("spread3_iuur_seed" + std::to_string(seed));
    std::fprintf(stderr, "  desk run seed %llu -> %s\n", static_cast<unsigned long long>(seed),
                 c.out_dir.c_str());
    DeskRun r;
    r.summary = harness::run_training(c);
    const double tenth = static_cast<double>(c.episodes) / 10.0;
    std::vector<double> first, last;
    for (const auto& p : r.summary.evals) {
      if (p.episode <= tenth) first.push_back(p.mean());
      if (p.episode > c.episodes - tenth) last.push_back(p.mean());
    }
    auto mean = [](const std::vector<double>& v) {
      return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    r.first = mean(first);
    r.last = mean(last);
    runs.push_back(std::move(r));
  }
  return runs;
}

Verdict learning_smoke(const std::filesystem::path& root) {
  const auto& runs = desk_runs(root);
  int improved = 0;
  std::string detail;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    improved += runs[i].last - runs[i].first > 0.0;
    detail += fmt("%sseed %zu: %.1f -> %.1f", i ? "; " : "", i + 1, runs[i].first, runs[i].last);
  }
  return {improved >= 2, fmt("%d/3 seeds improved (", improved) + detail + ")"};
}

Verdict probe_tendency(const std::filesystem::path& root) {
  std::size_t windows = 0, smaller = 0;
  for (const DeskRun& r : desk_runs(root)) {
    for (const auto& p : r.summary.probes) {
      ++windows;
      smaller += p.result.norm_fixed < p.result.norm_bellman;
    }
  }
  const double frac = windows ? static_cast<double>(smaller) / static_cast<double>(windows) : 0.0;
  return {windows >= 20 && frac >= 0.6,
          fmt("norm_fixed < norm_bellman in %zu/%zu windows (%.0f%%)", smaller, windows, 100 * frac)};
}

// ---- 7: interaction speedup ----
Verdict interaction_speedup() {
  const harness::TimingPair ten = harness::bench_interaction(Scenario::kSpread10, 10000, 1);
  const harness::TimingPair three = harness::bench_interaction(Scenario::kSpread3, 10000, 1);
  return {ten.speedup() >= 1.5 && three.speedup() >= 1.0,
          fmt("spread10 %.2fx (%.2f vs %.2f us/step, %llu steps), spread3 %.2fx (%.2f vs %.2f us/step)",
              ten.speedup(), 1e6 * ten.baseline.mean_seconds, 1e6 * ten.candidate.mean_seconds,
              static_cast<unsigned long long>(ten.candidate.samples), three.speedup(),
              1e6 * three.baseline.mean_seconds, 1e6 * three.candidate.mean_seconds)};
}

// ---- 8: training time ordering on pp3v1 ----
Verdict training_ordering(std::uint64_t episodes, const std::filesystem::path& root) {
  harness::RunConfig base = harness::desk_profile();
  base.scenario = Scenario::kPredatorPrey3v1;
  base.algorithm = algo::Algorithm::kMaddpg;
  base.episodes = episodes;
  base.k = std::min<std::uint64_t>(base.k, episodes);
  base.eval_every = 0;
  base.probe_every = 0;
  base.write_checkpoint = false;
  base.seed = 1;
  base.out_dir = root / "pp3v1_maddpg";
  harness::RunConfig cand = base;
  cand.algorithm = algo::Algorithm::kIuur;  // predators
  cand.prey_algorithm = algo::Algorithm::kMaddpg;
  cand.out_dir = root / "pp3v1_iuur_vs_maddpg";
  const harness::TimingPair p = harness::bench_training(base, cand);
  const double tb = p.baseline.mean_seconds * static_cast<double>(episodes);
  const double tc = p.candidate.mean_seconds * static_cast<double>(episodes);
  return {tc < tb, fmt("%llu episodes: IUUR predators %.1f s vs MADDPG %.1f s (%.2fx)",
                       static_cast<unsigned long long>(episodes), tc, tb, p.speedup())};
}

// ---- 10: determinism ----
Verdict determinism(const std::filesystem::path& root) {
  harness::RunConfig c = harness::desk_profile();
  c.scenario = Scenario::kPredatorPrey3v1;
  c.algorithm = algo::Algorithm::kIuur;
  c.episodes = 120;
  c.k = 40;
  c.eval_every = 40;
  c.probe_every = 40;
  c.seed = 42;
  harness::RunConfig d = c;
  c.out_dir = root / "determinism_a";
  d.out_dir = root / "determinism_b";
  harness::run_training(c);
  harness::run_training(d);
  const std::string a = slurp(c.out_dir / "rewards.csv");
  const bool same = !a.empty() && a == slurp(d.out_dir / "rewards.csv");
  return {same, fmt("rewards.csv %s (%zu bytes, %llu episodes)", same ? "bit-identical" : "DIFFERS",
                    a.size(), static_cast<unsigned long long>(c.episodes))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria runner"};
  std::vector<int> only;
  std::string runs_dir = "acceptance_runs";
  std::uint64_t timing_episodes = 1000;
  app.add_option("--only", only, "Criteria to run (default: all)")->delimiter(',');
  app.add_option("--runs-dir", runs_dir, "Where training runs write their outputs");
  app.add_option("--timing-episodes", timing_episodes, "Episodes per side for the training-time criterion");
  CLI11_PARSE(app, argc, argv);
  const std::filesystem::path root = runs_dir;

  const std::map<int, std::pair<std::string, std::function<Verdict()>>> criteria = {
      {1, {"gradient-correctness", gradient_correctness}},
      {2, {"unified-exactness", unified_exactness}},
      {3, {"value-fixing-semantics", value_fixing}},
      {4, {"iu-freezing", iu_freezing}},
      {5, {"learner-schedule", schedule}},
      {6, {"learning-smoke", [&] { return learning_smoke(root); }}},
      {7, {"interaction-speedup", interaction_speedup}},
      {8, {"training-time-ordering", [&] { return training_ordering(timing_episodes, root); }}},
      {9, {"gradient-norm-probe", [&] { return probe_tendency(root); }}},
      {10, {"determinism", [&] { return determinism(root); }}},
  };
  const std::set<int> selected(only.begin(), only.end());
  int failed = 0;
  for (const auto& [id, entry] : criteria) {
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = entry.second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("criterion %d %s: %s  %s [%.1f s]\n", id, entry.first.c_str(), v.pass ? "PASS" : "FAIL",
                v.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
