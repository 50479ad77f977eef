#include "mubqe/deadline.hpp"

namespace mubqe {

namespace {
constexpr auto kNever = std::chrono::steady_clock::time_point::max();
thread_local std::chrono::steady_clock::time_point active = kNever;
thread_local unsigned spin = 0;
}  // namespace

DeadlineScope::DeadlineScope(std::chrono::steady_clock::time_point deadline)
    : previous_(active) {
  if (deadline < active) active = deadline;
}

DeadlineScope::~DeadlineScope() { active = previous_; }

void deadline_tick() {
  if (active == kNever) return;
  if (++spin % 32 != 0) return;
  if (std::chrono::steady_clock::now() > active) throw BudgetExceededError(true);
}

}  // namespace mubqe
