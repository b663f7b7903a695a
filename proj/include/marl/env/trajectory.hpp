#pragma once

#include <filesystem>
#include <fstream>

#include "marl/env/particle_world.hpp"

namespace marl::env {

// Optional trajectory dump: one CSV row per entity per step,
// header "step,entity_id,x,y,vx,vy".
class TrajectoryWriter {
 public:
  explicit TrajectoryWriter(const std::filesystem::path& path);
  void write(const WorldState& state);

 private:
  std::ofstream out_;
};

}  // namespace marl::env
