#include "marl/algo/schedule.hpp"

#include "marl/common/errors.hpp"

namespace marl::algo {

LearnerSchedule::LearnerSchedule(std::size_t team_size, std::uint64_t period, std::size_t learner)
    : team_size_(team_size), period_(period), learner_(learner) {
  if (team_size == 0) throw ConfigError("learner schedule needs a non-empty team");
  if (period == 0) throw ConfigError("learner period K must be positive");
  if (learner == 0 || learner > team_size) throw ConfigError("learner index out of range");
}

void LearnerSchedule::advance(std::uint64_t episode) {
  if (episode == 0) throw UsageError("episodes are numbered from 1");
  if (episode % period_ == 0) learner_ = learner_ % team_size_ + 1;
}

}  // namespace marl::algo
