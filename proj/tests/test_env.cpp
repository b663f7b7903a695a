#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "marl/common/errors.hpp"
#include "marl/env/particle_world.hpp"
#include "marl/env/trajectory.hpp"

using namespace marl;
using namespace marl::env;

namespace {

ParticleWorld make(Scenario s, std::uint64_t seed = 0) {
  EnvConfig c;
  c.scenario = s;
  c.seed = seed;
  return ParticleWorld(c);
}

std::vector<Action> zero_actions(std::size_t n) { return std::vector<Action>(n, Action{0.0, 0.0}); }

std::vector<Action> random_actions(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);  // exercises clipping too
  std::vector<Action> a(n);
  for (auto& x : a) x = {u(rng), u(rng)};
  return a;
}

void scatter(WorldState& s, Rng& rng, double extent = 1.0) {
  std::uniform_real_distribution<double> u(-extent, extent);
  for (Entity& e : s.entities) e.pos = {u(rng), u(rng)};
}

// Brute-force reward oracles, written against the stated rules only.
std::vector<double> spread_oracle(const WorldState& s, const EnvConfig& c) {
  std::vector<std::size_t> agents, marks;
  for (std::size_t i = 0; i < s.entities.size(); ++i) {
    (s.entities[i].kind == EntityKind::kAgent ? agents : marks).push_back(i);
  }
  double team = 0.0;
  for (std::size_t l : marks) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a : agents) {
      const double dx = s.entities[a].pos.x - s.entities[l].pos.x;
      const double dy = s.entities[a].pos.y - s.entities[l].pos.y;
      best = std::min(best, std::sqrt(dx * dx + dy * dy));
    }
    team -= best;
  }
  std::vector<double> r(agents.size(), team);
  for (std::size_t i : agents) {
    for (std::size_t j : agents) {
      if (i == j) continue;
      const double dx = s.entities[i].pos.x - s.entities[j].pos.x;
      const double dy = s.entities[i].pos.y - s.entities[j].pos.y;
      if (std::sqrt(dx * dx + dy * dy) < s.entities[i].radius + s.entities[j].radius) {
        r[i] -= c.collision_penalty;
      }
    }
  }
  return r;
}

std::vector<double> predator_prey_oracle(const WorldState& s, const EnvConfig& c) {
  std::vector<std::size_t> pred, prey;
  for (std::size_t i = 0; i < s.entities.size(); ++i) {
    if (s.entities[i].team == Team::kPredator) pred.push_back(i);
    if (s.entities[i].team == Team::kPrey) prey.push_back(i);
  }
  auto dist = [&](std::size_t a, std::size_t b) {
    const double dx = s.entities[a].pos.x - s.entities[b].pos.x;
    const double dy = s.entities[a].pos.y - s.entities[b].pos.y;
    return std::sqrt(dx * dx + dy * dy);
  };
  auto bound = [&](double x) {
    x = std::abs(x);
    if (x < 0.9) return 0.0;
    if (x < 1.0) return (x - 0.9) * 10.0;
    return std::min(std::exp(2 * x - 2), 10.0);
  };
  std::vector<double> r(pred.size() + prey.size(), 0.0);
  for (std::size_t p : pred) {
    double m = INFINITY;
    for (std::size_t q : prey) m = std::min(m, dist(p, q));
    r[p] = -c.shaping_coef * m;
  }
  for (std::size_t q : prey) {
    double m = INFINITY;
    for (std::size_t p : pred) m = std::min(m, dist(p, q));
    r[q] = c.shaping_coef * m - bound(s.entities[q].pos.x) - bound(s.entities[q].pos.y);
  }
  for (std::size_t q : prey) {
    for (std::size_t p : pred) {
      if (dist(p, q) < s.entities[p].radius + s.entities[q].radius) {
        for (std::size_t o : pred) r[o] += c.catch_reward;
        r[q] -= c.catch_reward;
      }
    }
  }
  return r;
}

}  // namespace

TEST(Reset, Spread3Layout) {
  ParticleWorld w = make(Scenario::kSpread3, 1);
  const auto obs = w.reset();
  EXPECT_EQ(w.agent_count(), 3u);
  std::size_t landmarks = 0;
  for (const Entity& e : w.state().entities) {
    EXPECT_EQ(e.vel, (Vec2{0.0, 0.0}));
    if (e.kind == EntityKind::kLandmark) ++landmarks;
  }
  EXPECT_EQ(landmarks, 3u);
  EXPECT_EQ(obs.size(), 3u);
}

TEST(Reset, Pp6v2Layout) {
  ParticleWorld w = make(Scenario::kPredatorPrey6v2, 1);
  w.reset();
  std::size_t pred = 0, prey = 0, obst = 0;
  for (const Entity& e : w.state().entities) {
    pred += e.team == Team::kPredator;
    prey += e.team == Team::kPrey;
    obst += e.kind == EntityKind::kObstacle;
  }
  EXPECT_EQ(pred, 6u);
  EXPECT_EQ(prey, 2u);
  EXPECT_EQ(obst, 2u);
}

TEST(Reset, ScenarioCountsMatchTable) {
  EXPECT_EQ(layout_of(Scenario::kSpread10).agents(), 10u);
  EXPECT_EQ(layout_of(Scenario::kSpread10).landmarks, 10u);
  EXPECT_EQ(layout_of(Scenario::kPredatorPrey3v1).predators_or_cooperators, 3u);
  EXPECT_EQ(layout_of(Scenario::kPredatorPrey3v1).preys, 1u);
  EXPECT_EQ(layout_of(Scenario::kPredatorPrey3v1).obstacles, 2u);
}

TEST(Reset, SameSeedIsBitIdenticalAndPlacementInBounds) {
  ParticleWorld a = make(Scenario::kPredatorPrey3v1, 7);
  ParticleWorld b = make(Scenario::kPredatorPrey3v1, 7);
  EXPECT_EQ(a.reset(), b.reset());
  EXPECT_EQ(a.state(), b.state());
  for (const Entity& e : a.state().entities) {
    const double lim = e.kind == EntityKind::kObstacle ? 0.9 : 1.0;
    EXPECT_LE(std::abs(e.pos.x), lim);
    EXPECT_LE(std::abs(e.pos.y), lim);
  }
  ParticleWorld c = make(Scenario::kPredatorPrey3v1, 8);
  c.reset();
  EXPECT_NE(a.state(), c.state());
}

TEST(Step, ZeroForcesAtRestKeepPositions) {
  ParticleWorld w = make(Scenario::kSpread10, 2);
  w.reset();
  const WorldState before = w.state();
  w.step(zero_actions(10));
  for (std::size_t i = 0; i < before.entities.size(); ++i) {
    EXPECT_EQ(w.state().entities[i].pos, before.entities[i].pos);
  }
}

TEST(Step, ConstantForceMatchesHandIntegration) {
  ParticleWorld w = make(Scenario::kSpread3);
  w.reset();
  WorldState s = w.state();
  s.entities[0].pos = {0.0, 0.0};
  s.entities[1].pos = {5.0, 5.0};
  s.entities[2].pos = {-5.0, 5.0};
  w.set_state(s);
  std::vector<Action> a = zero_actions(3);
  a[0] = {1.0, 0.5};
  // v <- v + 0.05 u - 0.25 v; p <- p + v (by hand)
  const double vx[] = {0.05, 0.0875, 0.115625};
  const double px[] = {0.05, 0.1375, 0.253125};
  for (int t = 0; t < 3; ++t) {
    w.step(a);
    const Entity& e = w.state().entities[0];
    EXPECT_NEAR(e.vel.x, vx[t], 1e-15);
    EXPECT_NEAR(e.vel.y, vx[t] / 2, 1e-15);
    EXPECT_NEAR(e.pos.x, px[t], 1e-15);
    EXPECT_NEAR(e.pos.y, px[t] / 2, 1e-15);
  }
}

TEST(Step, ActionsAreClippedBeforePhysics) {
  ParticleWorld a = make(Scenario::kSpread3, 3), b = make(Scenario::kSpread3, 3);
  a.reset();
  b.reset();
  a.step(std::vector<Action>(3, Action{7.0, -9.0}));
  b.step(std::vector<Action>(3, Action{1.0, -1.0}));
  EXPECT_EQ(a.state(), b.state());
}

TEST(Step, ActionCountMismatchIsUsageError) {
  ParticleWorld w = make(Scenario::kSpread3);
  w.reset();
  EXPECT_THROW(w.step(zero_actions(2)), UsageError);
}

TEST(Step, DoneAfterEpisodeLength) {
  ParticleWorld w = make(Scenario::kSpread3);
  w.reset();
  for (int t = 1; t <= 25; ++t) EXPECT_EQ(w.step(zero_actions(3)).done, t == 25);
}

TEST(Step, SpeedIsClippedEveryStep) {
  for (Scenario s : {Scenario::kSpread3, Scenario::kPredatorPrey6v2}) {
    ParticleWorld w = make(s, 4);
    Rng rng(5);
    w.reset();
    for (int t = 0; t < 200; ++t) {
      w.step(random_actions(w.agent_count(), rng));
      for (const Entity& e : w.state().entities) {
        if (e.kind == EntityKind::kAgent) EXPECT_LE(norm(e.vel), e.max_speed * (1 + 1e-12));
      }
    }
  }
}

TEST(Step, AgentsNeverEndInsideObstacles) {
  ParticleWorld w = make(Scenario::kPredatorPrey6v2, 6);
  Rng rng(7);
  w.reset();
  for (int t = 0; t < 300; ++t) {
    w.step(random_actions(w.agent_count(), rng));
    const auto& E = w.state().entities;
    for (std::size_t i = 0; i < w.agent_count(); ++i) {
      for (const Entity& o : E) {
        if (o.kind != EntityKind::kObstacle) continue;
        EXPECT_GE(distance(E[i].pos, o.pos), (E[i].radius + o.radius) * (1 - 1e-9));
      }
    }
  }
}

TEST(Step, SameSeedAndActionsGiveIdenticalTrajectories) {
  ParticleWorld a = make(Scenario::kPredatorPrey3v1, 9), b = make(Scenario::kPredatorPrey3v1, 9);
  Rng ra(10), rb(10);
  a.reset();
  b.reset();
  for (int t = 0; t < 50; ++t) {
    const StepResult x = a.step(random_actions(4, ra));
    const StepResult y = b.step(random_actions(4, rb));
    EXPECT_EQ(x.rewards, y.rewards);
    EXPECT_EQ(x.observations, y.observations);
  }
  EXPECT_EQ(a.state(), b.state());
}

TEST(Collision, SymmetricAndStrict) {
  Entity a, b;
  a.radius = 0.1;
  b.radius = 0.2;
  a.pos = {0.0, 0.0};
  b.pos = {0.29, 0.0};
  EXPECT_TRUE(colliding(a, b));
  EXPECT_TRUE(colliding(b, a));
  b.pos = {0.31, 0.0};
  EXPECT_FALSE(colliding(a, b));
  EXPECT_FALSE(colliding(b, a));
}

TEST(SpreadReward, OverlappingCooperatorsArePunished) {
  ParticleWorld w = make(Scenario::kSpread3);
  w.reset();
  WorldState s = w.state();
  s.entities[0].pos = {0.0, 0.0};
  s.entities[1].pos = {0.1, 0.0};
  s.entities[2].pos = {0.9, 0.9};
  for (auto& e : s.entities) e.vel = {};
  w.set_state(s);
  const auto r = w.step(zero_actions(3)).rewards;
  EXPECT_DOUBLE_EQ(r[0], r[2] - 1.0);
  EXPECT_DOUBLE_EQ(r[1], r[2] - 1.0);
}

TEST(SpreadReward, AgentsOnLandmarksGiveZeroTeamTerm) {
  ParticleWorld w = make(Scenario::kSpread3);
  WorldState s = w.state();
  const Vec2 spots[] = {{-0.6, 0.0}, {0.0, 0.6}, {0.6, 0.0}};
  for (int i = 0; i < 3; ++i) {
    s.entities[i].pos = spots[i];
    s.entities[3 + i].pos = spots[i];
  }
  for (double r : spread_reward(s, w.config())) EXPECT_EQ(r, 0.0);
}

TEST(SpreadReward, SingleUncoveredLandmarkCostsItsDistance) {
  ParticleWorld w = make(Scenario::kSpread3);
  WorldState s = w.state();
  const Vec2 spots[] = {{-0.6, 0.0}, {0.0, 0.6}, {0.6, 0.0}};
  for (int i = 0; i < 3; ++i) {
    s.entities[i].pos = spots[i];
    s.entities[3 + i].pos = spots[i];
  }
  s.entities[5].pos = {0.6, -0.7};  // nearest agent is agent 2 at distance 0.7
  for (double r : spread_reward(s, w.config())) EXPECT_NEAR(r, -0.7, 1e-15);
}

TEST(SpreadReward, MatchesBruteForceOracle) {
  for (Scenario sc : {Scenario::kSpread3, Scenario::kSpread10}) {
    ParticleWorld w = make(sc);
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      WorldState s = w.state();
      scatter(s, rng, trial % 2 ? 0.4 : 1.0);  // dense layouts force collisions
      const auto got = spread_reward(s, w.config());
      const auto want = spread_oracle(s, w.config());
      ASSERT_EQ(got.size(), want.size());
      for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
    }
  }
}

TEST(SpreadReward, TeamTermIsSharedAndPermutationInvariant) {
  ParticleWorld w = make(Scenario::kSpread10);
  Rng rng(12);
  WorldState s = w.state();
  scatter(s, rng);
  for (std::size_t i = 0; i < 10; ++i) s.entities[i].pos = {static_cast<double>(i), 3.0};  // no collisions
  const auto r = spread_reward(s, w.config());
  for (double v : r) EXPECT_EQ(v, r[0]);
  WorldState p = s;
  std::swap(p.entities[0].pos, p.entities[7].pos);
  std::swap(p.entities[2].pos, p.entities[5].pos);
  EXPECT_NEAR(spread_reward(p, w.config())[0], r[0], 1e-12);
}

TEST(PredatorPreyReward, ContactRewardsEveryPredator) {
  ParticleWorld w = make(Scenario::kPredatorPrey3v1);
  WorldState s = w.state();
  s.entities[0].pos = {0.0, 0.0};
  s.entities[1].pos = {0.5, 0.5};
  s.entities[2].pos = {-0.5, 0.5};
  s.entities[3].pos = {0.05, 0.0};  // prey touching predator 0
  s.entities[4].pos = {5.0, 5.0};
  s.entities[5].pos = {-5.0, -5.0};
  const auto r = predator_prey_reward(s, w.config());
  EXPECT_NEAR(r[0], 10.0 - 0.1 * 0.05, 1e-12);
  EXPECT_GT(r[1], 9.0);
  EXPECT_GT(r[2], 9.0);
  EXPECT_LT(r[3], -9.0);
}

TEST(PredatorPreyReward, FarApartShapingSigns) {
  ParticleWorld w = make(Scenario::kPredatorPrey3v1);
  WorldState s = w.state();
  s.entities[0].pos = {-0.8, -0.8};
  s.entities[1].pos = {-0.7, -0.8};
  s.entities[2].pos = {-0.8, -0.7};
  s.entities[3].pos = {0.8, 0.8};
  const auto r = predator_prey_reward(s, w.config());
  for (int i = 0; i < 3; ++i) EXPECT_LT(r[i], 0.0);
  EXPECT_GT(r[3], 0.0);
}

TEST(PredatorPreyReward, BoundaryPenaltyEscalates) {
  const EnvConfig c;
  EXPECT_EQ(boundary_penalty(0.5, c), 0.0);
  EXPECT_NEAR(boundary_penalty(0.95, c), 0.5, 1e-12);
  EXPECT_NEAR(boundary_penalty(-0.95, c), 0.5, 1e-12);
  EXPECT_NEAR(boundary_penalty(1.2, c), std::exp(0.4), 1e-12);
  EXPECT_EQ(boundary_penalty(50.0, c), 10.0);
  double prev = 0.0;
  for (double x = 0.0; x < 3.0; x += 0.01) {
    EXPECT_GE(boundary_penalty(x, c), prev);
    prev = boundary_penalty(x, c);
  }
}

TEST(PredatorPreyReward, MatchesPairwiseOracle) {
  for (Scenario sc : {Scenario::kPredatorPrey3v1, Scenario::kPredatorPrey6v2}) {
    ParticleWorld w = make(sc);
    Rng rng(13);
    for (int trial = 0; trial < 300; ++trial) {
      WorldState s = w.state();
      scatter(s, rng, trial % 3 == 0 ? 0.3 : 1.3);
      const auto got = predator_prey_reward(s, w.config());
      const auto want = predator_prey_oracle(s, w.config());
      for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
    }
  }
}

TEST(Observation, DimensionsPerScenario) {
  EXPECT_EQ(make(Scenario::kSpread3).observation_dim(), 14u);
  EXPECT_EQ(make(Scenario::kSpread10).observation_dim(), 42u);
  EXPECT_EQ(make(Scenario::kPredatorPrey3v1).observation_dim(), 22u);
  EXPECT_EQ(make(Scenario::kPredatorPrey6v2).observation_dim(), 38u);
  for (Scenario s : {Scenario::kSpread3, Scenario::kSpread10, Scenario::kPredatorPrey3v1,
                     Scenario::kPredatorPrey6v2}) {
    ParticleWorld w = make(s, 1);
    for (const auto& o : w.reset()) EXPECT_EQ(o.size(), w.observation_dim());
    EXPECT_EQ(w.global_state().size(), w.state_dim());
  }
}

TEST(Observation, IsFirstPerson) {
  ParticleWorld w = make(Scenario::kPredatorPrey3v1, 3);
  w.reset();
  Rng rng(4);
  w.step(random_actions(4, rng));
  const auto& E = w.state().entities;
  const auto o = w.observation(1);
  EXPECT_EQ(o[0], E[1].vel.x);
  EXPECT_EQ(o[3], E[1].pos.y);
  EXPECT_EQ(o[4], E[4].pos.x - E[1].pos.x);  // first obstacle
  EXPECT_EQ(o[8], E[0].pos.x - E[1].pos.x);  // first other agent
  EXPECT_EQ(o[14], E[0].vel.x - E[1].vel.x);  // its relative velocity
  EXPECT_EQ(o[20], 1.0);                      // predator flag
  EXPECT_EQ(w.observation(3)[21], 1.0);       // prey flag
}

TEST(Trajectory, WritesOneRowPerEntity) {
  const auto path = std::filesystem::temp_directory_path() / "marl_traj_test.csv";
  {
    TrajectoryWriter out(path);
    ParticleWorld w = make(Scenario::kSpread3, 1);
    w.reset();
    out.write(w.state());
    w.step(zero_actions(3));
    out.write(w.state());
  }
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "step,entity_id,x,y,vx,vy");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 12);
  std::filesystem::remove(path);
}
