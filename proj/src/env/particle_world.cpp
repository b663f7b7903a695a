#include "marl/env/particle_world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "marl/common/errors.hpp"

namespace marl::env {

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::kSpread3: return "spread3";
    case Scenario::kSpread10: return "spread10";
    case Scenario::kPredatorPrey3v1: return "pp3v1";
    case Scenario::kPredatorPrey6v2: return "pp6v2";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  for (Scenario s : {Scenario::kSpread3, Scenario::kSpread10, Scenario::kPredatorPrey3v1,
                     Scenario::kPredatorPrey6v2}) {
    if (scenario_name(s) == name) return s;
  }
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

bool is_predator_prey(Scenario s) {
  return s == Scenario::kPredatorPrey3v1 || s == Scenario::kPredatorPrey6v2;
}

std::string_view team_name(Team t) {
  switch (t) {
    case Team::kCooperator: return "cooperator";
    case Team::kPredator: return "predator";
    case Team::kPrey: return "prey";
    case Team::kNone: return "none";
  }
  return "none";
}

double norm(Vec2 v) { return std::hypot(v.x, v.y); }
double distance(Vec2 a, Vec2 b) { return norm(a - b); }

bool colliding(const Entity& a, const Entity& b) {
  return distance(a.pos, b.pos) < a.radius + b.radius;
}

ScenarioLayout layout_of(Scenario s) {
  switch (s) {
    case Scenario::kSpread3: return {3, 0, 3, 0};
    case Scenario::kSpread10: return {10, 0, 10, 0};
    case Scenario::kPredatorPrey3v1: return {3, 1, 0, 2};
    case Scenario::kPredatorPrey6v2: return {6, 2, 0, 2};
  }
  throw ConfigError("unknown scenario");
}

ParticleWorld::ParticleWorld(EnvConfig config)
    : config_(config), layout_(layout_of(config.scenario)), rng_(config.seed) {
  if (config_.episode_length <= 0) throw ConfigError("episode_length must be positive");
  if (!(config_.damping >= 0.0 && config_.damping <= 1.0)) {
    throw ConfigError("damping must lie in [0, 1]");
  }
  const bool pp = is_predator_prey(config_.scenario);
  auto add = [&](EntityKind kind, Team team, double radius, double force, double max_speed) {
    state_.entities.push_back({kind, team, {}, {}, radius, max_speed, force});
  };
  for (std::size_t i = 0; i < layout_.predators_or_cooperators; ++i) {
    const KindPhysics& k = pp ? config_.predator : config_.cooperator;
    add(EntityKind::kAgent, pp ? Team::kPredator : Team::kCooperator, k.radius,
        k.force_multiplier, k.max_speed);
  }
  for (std::size_t i = 0; i < layout_.preys; ++i) {
    add(EntityKind::kAgent, Team::kPrey, config_.prey.radius, config_.prey.force_multiplier,
        config_.prey.max_speed);
  }
  for (std::size_t i = 0; i < layout_.landmarks; ++i) {
    add(EntityKind::kLandmark, Team::kNone, config_.landmark_radius, 0.0, 0.0);
  }
  for (std::size_t i = 0; i < layout_.obstacles; ++i) {
    add(EntityKind::kObstacle, Team::kNone, config_.obstacle_radius, 0.0, 0.0);
  }
}

std::size_t ParticleWorld::observation_dim() const {
  const std::size_t others = layout_.agents() - 1;
  if (is_predator_prey(config_.scenario)) {
    return 4 + 2 * layout_.obstacles + 4 * others + 2;
  }
  return 4 + 2 * layout_.landmarks + 2 * others;
}

Team ParticleWorld::team_of(std::size_t agent) const {
  if (agent >= agent_count()) throw UsageError("agent index out of range");
  return state_.entities[agent].team;
}

std::vector<Team> ParticleWorld::teams() const {
  std::vector<Team> out;
  for (std::size_t i = 0; i < agent_count(); ++i) {
    const Team t = state_.entities[i].team;
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  return out;
}

std::vector<std::vector<double>> ParticleWorld::reset() { return reset(rng_); }

std::vector<std::vector<double>> ParticleWorld::reset(Rng& rng) {
  std::uniform_real_distribution<double> place(-config_.world_half_extent,
                                               config_.world_half_extent);
  std::uniform_real_distribution<double> place_obstacle(-config_.obstacle_half_extent,
                                                        config_.obstacle_half_extent);
  for (Entity& e : state_.entities) {
    auto& dist = e.kind == EntityKind::kObstacle ? place_obstacle : place;
    e.pos.x = dist(rng);
    e.pos.y = dist(rng);
    e.vel = {};
  }
  state_.t = 0;
  return observations();
}

void ParticleWorld::set_state(WorldState state) {
  if (state.entities.size() != state_.entities.size()) {
    throw ConfigError("set_state: entity count differs from the scenario");
  }
  state_ = std::move(state);
}

void ParticleWorld::integrate(std::span<const Action> actions) {
  for (std::size_t i = 0; i < agent_count(); ++i) {
    Entity& e = state_.entities[i];
    const Vec2 force{std::clamp(actions[i][0], -1.0, 1.0), std::clamp(actions[i][1], -1.0, 1.0)};
    e.vel = e.vel + e.force_multiplier * force - config_.damping * e.vel;
    const double speed = norm(e.vel);
    if (speed > e.max_speed) e.vel = (e.max_speed / speed) * e.vel;
    e.pos += e.vel;
  }
}

// Agents overlapping an obstacle move to the nearest point outside every
// obstacle (each inflated by the agent radius). That point is either a radial
// projection onto one inflated circle or a crossing point of two of them.
void ParticleWorld::resolve_obstacles() {
  if (layout_.obstacles == 0) return;
  const std::size_t first = layout_.agents() + layout_.landmarks;
  const std::size_t last = state_.entities.size();
  for (std::size_t i = 0; i < agent_count(); ++i) {
    Entity& a = state_.entities[i];
    auto clear = [&](Vec2 p) {
      for (std::size_t k = first; k < last; ++k) {
        const Entity& o = state_.entities[k];
        if (distance(p, o.pos) < (a.radius + o.radius) * (1.0 - 1e-12)) return false;
      }
      return true;
    };
    if (clear(a.pos)) continue;
    std::vector<Vec2> candidates;
    for (std::size_t k = first; k < last; ++k) {
      const Entity& o = state_.entities[k];
      const Vec2 d = a.pos - o.pos;
      const double dist = norm(d);
      const Vec2 dir = dist > 0.0 ? (1.0 / dist) * d : Vec2{1.0, 0.0};
      candidates.push_back(o.pos + (a.radius + o.radius) * dir);
      for (std::size_t m = k + 1; m < last; ++m) {
        const Entity& q = state_.entities[m];
        const double r0 = a.radius + o.radius;
        const double r1 = a.radius + q.radius;
        const Vec2 oq = q.pos - o.pos;
        const double c = norm(oq);
        if (c == 0.0 || c > r0 + r1 || c < std::abs(r0 - r1)) continue;
        const double along = (r0 * r0 - r1 * r1 + c * c) / (2.0 * c);
        const double h = std::sqrt(std::max(0.0, r0 * r0 - along * along));
        const Vec2 u = (1.0 / c) * oq;
        const Vec2 base = o.pos + along * u;
        candidates.push_back(base + h * Vec2{-u.y, u.x});
        candidates.push_back(base - h * Vec2{-u.y, u.x});
      }
    }
    double best = std::numeric_limits<double>::infinity();
    Vec2 target = a.pos;
    for (Vec2 p : candidates) {
      const double d = distance(p, a.pos);
      if (d < best && clear(p)) {
        best = d;
        target = p;
      }
    }
    a.pos = target;
  }
}

StepResult ParticleWorld::step(std::span<const Action> actions) {
  if (actions.size() != agent_count()) {
    throw UsageError("step: expected " + std::to_string(agent_count()) + " actions, got " +
                     std::to_string(actions.size()));
  }
  integrate(actions);
  resolve_obstacles();
  ++state_.t;
  StepResult result;
  result.rewards = rewards();
  result.observations = observations();
  result.done = state_.t >= config_.episode_length;
  return result;
}

std::vector<double> ParticleWorld::global_state() const {
  std::vector<double> s;
  s.reserve(state_dim());
  for (const Entity& e : state_.entities) {
    s.insert(s.end(), {e.pos.x, e.pos.y, e.vel.x, e.vel.y});
  }
  return s;
}

std::vector<double> ParticleWorld::observation(std::size_t agent) const {
  if (agent >= agent_count()) throw UsageError("agent index out of range");
  const Entity& self = state_.entities[agent];
  std::vector<double> o;
  o.reserve(observation_dim());
  o.insert(o.end(), {self.vel.x, self.vel.y, self.pos.x, self.pos.y});
  const std::size_t n = agent_count();
  for (std::size_t k = n; k < state_.entities.size(); ++k) {
    const Vec2 rel = state_.entities[k].pos - self.pos;
    o.insert(o.end(), {rel.x, rel.y});
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (j == agent) continue;
    const Vec2 rel = state_.entities[j].pos - self.pos;
    o.insert(o.end(), {rel.x, rel.y});
  }
  if (is_predator_prey(config_.scenario)) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == agent) continue;
      const Vec2 rel = state_.entities[j].vel - self.vel;
      o.insert(o.end(), {rel.x, rel.y});
    }
    const bool predator = self.team == Team::kPredator;
    o.insert(o.end(), {predator ? 1.0 : 0.0, predator ? 0.0 : 1.0});
  }
  return o;
}

std::vector<std::vector<double>> ParticleWorld::observations() const {
  std::vector<std::vector<double>> out;
  out.reserve(agent_count());
  for (std::size_t i = 0; i < agent_count(); ++i) out.push_back(observation(i));
  return out;
}

std::vector<double> ParticleWorld::rewards() const {
  return is_predator_prey(config_.scenario) ? predator_prey_reward(state_, config_)
                                            : spread_reward(state_, config_);
}

std::vector<double> spread_reward(const WorldState& state, const EnvConfig& config) {
  std::vector<const Entity*> agents;
  std::vector<const Entity*> landmarks;
  for (const Entity& e : state.entities) {
    if (e.kind == EntityKind::kAgent) agents.push_back(&e);
    if (e.kind == EntityKind::kLandmark) landmarks.push_back(&e);
  }
  double team = 0.0;
  for (const Entity* l : landmarks) {
    double best = std::numeric_limits<double>::infinity();
    for (const Entity* a : agents) best = std::min(best, distance(a->pos, l->pos));
    team -= best;
  }
  std::vector<double> r(agents.size(), team);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    for (std::size_t j = i + 1; j < agents.size(); ++j) {
      if (colliding(*agents[i], *agents[j])) {
        r[i] -= config.collision_penalty;
        r[j] -= config.collision_penalty;
      }
    }
  }
  return r;
}

double boundary_penalty(double coordinate, const EnvConfig& config) {
  const double x = std::abs(coordinate);
  const double start = config.boundary_start;
  if (x < start) return 0.0;
  if (x < 1.0) return (x - start) / (1.0 - start);
  return std::min(std::exp(2.0 * x - 2.0), config.boundary_cap);
}

std::vector<double> predator_prey_reward(const WorldState& state, const EnvConfig& config) {
  std::vector<std::size_t> predators;
  std::vector<std::size_t> preys;
  for (std::size_t i = 0; i < state.entities.size(); ++i) {
    const Entity& e = state.entities[i];
    if (e.kind != EntityKind::kAgent) continue;
    (e.team == Team::kPredator ? predators : preys).push_back(i);
  }
  std::vector<double> r(predators.size() + preys.size(), 0.0);
  const auto& E = state.entities;

  for (std::size_t p : predators) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t q : preys) nearest = std::min(nearest, distance(E[p].pos, E[q].pos));
    if (!preys.empty()) r[p] -= config.shaping_coef * nearest;
  }
  for (std::size_t q : preys) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t p : predators) nearest = std::min(nearest, distance(E[p].pos, E[q].pos));
    if (!predators.empty()) r[q] += config.shaping_coef * nearest;
    r[q] -= boundary_penalty(E[q].pos.x, config) + boundary_penalty(E[q].pos.y, config);
  }
  for (std::size_t q : preys) {
    for (std::size_t p : predators) {
      if (!colliding(E[p], E[q])) continue;
      for (std::size_t other : predators) r[other] += config.catch_reward;
      r[q] -= config.catch_reward;
    }
  }
  return r;
}

}  // namespace marl::env
