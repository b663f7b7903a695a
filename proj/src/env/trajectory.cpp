#include "marl/env/trajectory.hpp"

#include <cstdio>

#include "marl/common/errors.hpp"

namespace marl::env {

TrajectoryWriter::TrajectoryWriter(const std::filesystem::path& path) : out_(path) {
  if (!out_) throw ConfigError("cannot open trajectory file " + path.string());
  out_ << "step,entity_id,x,y,vx,vy\n";
}

void TrajectoryWriter::write(const WorldState& state) {
  char buf[160];
  for (std::size_t i = 0; i < state.entities.size(); ++i) {
    const Entity& e = state.entities[i];
    std::snprintf(buf, sizeof(buf), "%d,%zu,%.17g,%.17g,%.17g,%.17g\n", state.t, i, e.pos.x,
                  e.pos.y, e.vel.x, e.vel.y);
    out_ << buf;
  }
}

}  // namespace marl::env
