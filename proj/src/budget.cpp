#include "dmod/budget.hpp"

#include <string>

#include "dmod/error.hpp"

namespace dmod {

namespace {
thread_local WorkBudget* active_budget = nullptr;
}

WorkBudget::WorkBudget(std::size_t max_steps) : max_(max_steps), outer_(active_budget) {
  active_budget = this;
}

WorkBudget::~WorkBudget() { active_budget = outer_; }

void WorkBudget::charge(std::size_t steps) {
  WorkBudget* b = active_budget;
  if (!b) return;
  b->used_ += steps;
  if (b->used_ > b->max_) {
    throw ResourceCap("work budget of " + std::to_string(b->max_) + " elimination steps exhausted");
  }
}

} // namespace dmod
