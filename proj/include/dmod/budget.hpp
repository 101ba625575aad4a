#pragma once

#include <cstddef>

namespace dmod {

/// While alive, counts the arithmetic done by exact eliminations on this
/// thread and throws ResourceCap once the total passes `max_steps`. Scopes
/// nest; the innermost one is charged. Without a scope nothing is counted.
class WorkBudget {
public:
  explicit WorkBudget(std::size_t max_steps);
  ~WorkBudget();
  WorkBudget(const WorkBudget&) = delete;
  WorkBudget& operator=(const WorkBudget&) = delete;

  static void charge(std::size_t steps);
  std::size_t used() const { return used_; }

private:
  std::size_t max_;
  std::size_t used_ = 0;
  WorkBudget* outer_;
};

} // namespace dmod
