#pragma once

#include <cstddef>
#include <cstdint>

namespace marl::algo {

// Which member of a team currently holds the learner role. Learner indices
// are 1-based; episodes are 1-based. The learner for episode e is
// ((e - 1) / K) mod N + 1, i.e. the role passes on after every episode that
// is a multiple of K and wraps from the last member back to the first.
class LearnerSchedule {
 public:
  LearnerSchedule() = default;
  // `learner` restores a saved position (1-based).
  LearnerSchedule(std::size_t team_size, std::uint64_t period, std::size_t learner = 1);

  std::size_t learner() const { return learner_; }
  std::size_t learner_index() const { return learner_ - 1; }
  std::size_t team_size() const { return team_size_; }
  std::uint64_t period() const { return period_; }

  // Called once episode `episode` has finished.
  void advance(std::uint64_t episode);

  friend bool operator==(const LearnerSchedule&, const LearnerSchedule&) = default;

 private:
  std::size_t team_size_ = 1;
  std::uint64_t period_ = 1;
  std::size_t learner_ = 1;
};

}  // namespace marl::algo
