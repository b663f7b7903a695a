#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "marl/common/rng.hpp"

namespace marl::env {

enum class Scenario { kSpread3, kSpread10, kPredatorPrey3v1, kPredatorPrey6v2 };

std::string_view scenario_name(Scenario s);  // "spread3", "spread10", "pp3v1", "pp6v2"
Scenario parse_scenario(std::string_view name);
bool is_predator_prey(Scenario s);

enum class EntityKind { kAgent, kLandmark, kObstacle };
enum class Team { kCooperator, kPredator, kPrey, kNone };

std::string_view team_name(Team t);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

double norm(Vec2 v);
double distance(Vec2 a, Vec2 b);

struct Entity {
  EntityKind kind = EntityKind::kAgent;
  Team team = Team::kNone;
  Vec2 pos;
  Vec2 vel;  // world units per step
  double radius = 0.0;
  double max_speed = 0.0;
  double force_multiplier = 0.0;

  friend bool operator==(const Entity&, const Entity&) = default;
};

// Global simulator state. Agents come first (predators before preys), then
// landmarks and obstacles.
struct WorldState {
  std::vector<Entity> entities;
  int t = 0;

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

// Per-kind physics constants. Velocities and speeds are in units per step.
struct KindPhysics {
  double radius;
  double force_multiplier;
  double max_speed;
};

struct EnvConfig {
  Scenario scenario = Scenario::kSpread3;
  int episode_length = 25;
  double damping = 0.25;
  double world_half_extent = 1.0;  // initial placement in [-h, h]^2

  KindPhysics cooperator{0.15, 0.05, 0.3};
  KindPhysics predator{0.075, 0.03, 0.1};
  KindPhysics prey{0.05, 0.04, 0.13};
  double landmark_radius = 0.05;
  double obstacle_radius = 0.2;
  double obstacle_half_extent = 0.9;

  double collision_penalty = 1.0;  // spread, per collision partner
  double catch_reward = 10.0;      // predator-prey contact
  double shaping_coef = 0.1;
  double boundary_start = 0.9;     // prey boundary penalty starts here
  double boundary_cap = 10.0;

  std::uint64_t seed = 0;
};

struct ScenarioLayout {
  std::size_t predators_or_cooperators = 0;
  std::size_t preys = 0;
  std::size_t landmarks = 0;
  std::size_t obstacles = 0;

  std::size_t agents() const { return predators_or_cooperators + preys; }
  std::size_t entities() const { return agents() + landmarks + obstacles; }
};

ScenarioLayout layout_of(Scenario s);

inline constexpr std::size_t kActionDim = 2;
using Action = std::array<double, kActionDim>;

struct StepResult {
  std::vector<double> rewards;
  std::vector<std::vector<double>> observations;
  bool done = false;
};

// Deterministic 2-D particle world with double-integrator dynamics.
class ParticleWorld {
 public:
  explicit ParticleWorld(EnvConfig config);

  const EnvConfig& config() const { return config_; }
  const ScenarioLayout& layout() const { return layout_; }
  std::size_t agent_count() const { return layout_.agents(); }
  std::size_t state_dim() const { return 4 * layout_.entities(); }
  std::size_t observation_dim() const;
  Team team_of(std::size_t agent) const;
  std::vector<Team> teams() const;  // distinct teams in agent order

  // Places entities uniformly at random with zero velocities, drawing from
  // the world's own generator (seeded from config.seed).
  std::vector<std::vector<double>> reset();
  std::vector<std::vector<double>> reset(Rng& rng);

  // Advances one step. Actions are clipped to [-1, 1] per component.
  StepResult step(std::span<const Action> actions);

  const WorldState& state() const { return state_; }
  // Replaces the state wholesale; used by tests and by replay of trajectories.
  void set_state(WorldState state);

  std::vector<double> global_state() const;
  std::vector<double> observation(std::size_t agent) const;
  std::vector<std::vector<double>> observations() const;
  std::vector<double> rewards() const;

 private:
  void integrate(std::span<const Action> actions);
  void resolve_obstacles();

  EnvConfig config_;
  ScenarioLayout layout_;
  WorldState state_;
  Rng rng_;
};

// Collision test shared by rewards and tests: centre distance < sum of radii.
bool colliding(const Entity& a, const Entity& b);

// Reward rules, evaluated on a post-step state.
std::vector<double> spread_reward(const WorldState& state, const EnvConfig& config);
std::vector<double> predator_prey_reward(const WorldState& state, const EnvConfig& config);

// Prey penalty for one coordinate magnitude beyond the boundary start.
double boundary_penalty(double coordinate, const EnvConfig& config);

}  // namespace marl::env
