// Cooperative wall-clock limits. The decision procedures promise to stop
// soon after their budget deadline, but the work happens deep inside
// polynomial kernels whose single calls (a large determinant, a root
// isolation) can run for a long time. A DeadlineScope installs a deadline
// for the current thread; the kernels sprinkle deadline_tick() through their
// inner loops, which throws once the deadline has passed. Without an active
// scope the ticks are a counter increment and a branch.
#ifndef MUBQE_DEADLINE_HPP
#define MUBQE_DEADLINE_HPP

#include <chrono>
#include <stdexcept>

namespace mubqe {

// Thrown when a cooperative check crosses a limit; decide() and eliminate()
// convert it into a TimedOut / BudgetExceeded outcome.
class BudgetExceededError : public std::runtime_error {
 public:
  explicit BudgetExceededError(bool timed_out)
      : std::runtime_error(timed_out ? "deadline exceeded" : "budget exceeded"),
        timed_out_(timed_out) {}
  bool timed_out() const { return timed_out_; }

 private:
  bool timed_out_;
};

// Scopes nest; the tightest deadline wins, so an inner scope cannot extend
// an outer limit.
class DeadlineScope {
 public:
  explicit DeadlineScope(std::chrono::steady_clock::time_point deadline);
  ~DeadlineScope();
  DeadlineScope(const DeadlineScope&) = delete;
  DeadlineScope& operator=(const DeadlineScope&) = delete;

 private:
  std::chrono::steady_clock::time_point previous_;
};

// The clock is only consulted every few dozen calls; a tick in a tight loop
// costs next to nothing.
void deadline_tick();

}  // namespace mubqe

#endif
