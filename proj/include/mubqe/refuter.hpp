// Randomized semi-decision heuristic for unsatisfiability of a formula pool.
//
// The pool starts as the equations of a MUB system (or any list of
// quantifier-free formulas). A creation step picks a few pool formulas at
// random, existentially eliminates a few of their variables, and appends the
// quantifier-free image; a resolution step periodically picks a larger set
// and eliminates all of its variables, hoping for an outright contradiction.
// A literal "false" anywhere proves the existential closure of the original
// conjunction unsatisfiable. Satisfiable pools make the loop run until its
// step budget is gone; it cannot terminate with a wrong refutation.
//
// Every run is replayable: the trace records the RNG state ahead of each
// step, the chosen indices and variables, the input texts, and the outcome.
// check_trace() re-derives the choices from the seeds and re-runs the
// quantifier eliminations, so a trace is evidence, not just a log.
#ifndef MUBQE_REFUTER_HPP
#define MUBQE_REFUTER_HPP

#include <chrono>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "mubqe/mubgen.hpp"
#include "mubqe/qe.hpp"

namespace mubqe {

// splitmix64; the full state is one word, so a recorded snapshot replays a
// step's draws exactly
struct SplitMix {
  std::uint64_t state = 0;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t limit = n * (UINT64_MAX / n);
    std::uint64_t v;
    do { v = next(); } while (v >= limit);
    return v % n;
  }
};

enum class Origin { Initial, Created };

struct Pool {
  std::vector<FormulaPtr> formulas;
  std::vector<Origin> origins;

  std::size_t size() const { return formulas.size(); }
  void add(FormulaPtr f, Origin o) {
    formulas.push_back(std::move(f));
    origins.push_back(o);
  }
};

struct HeuristicConfig {
  unsigned creation_size = 4;     // |S| of a creation step
  unsigned elim_size = 6;         // |V| of a creation step
  unsigned resolution_period = 5; // resolution after every this many creations
  unsigned resolution_size = 13;  // |S| of a resolution step
  std::chrono::milliseconds step_timeout{30000};
  std::size_t max_steps = 100;    // creation steps before giving up
  std::chrono::milliseconds global_timeout{0};  // 0 means no wall limit
  std::uint64_t rng_seed = 1;
  // A new formula whose text is longer than this is discarded like a
  // tautology: too big to help later steps.
  std::size_t size_cap = 32768;
};

enum class StepKind { Creation, Resolution };
enum class StepOutcome { NewFormula, Bot, Top, TimedOut, BudgetExceeded };
const char* step_kind_name(StepKind k);
const char* step_outcome_name(StepOutcome o);

struct StepRecord {
  std::size_t index = 0;  // 1-based, over steps of both kinds
  StepKind kind = StepKind::Creation;
  std::uint64_t seed_snapshot = 0;      // RNG state before this step's draws
  std::vector<std::size_t> chosen;      // pool indices S, ascending
  std::vector<std::string> elim_names;  // V as variable names, as drawn
  std::vector<std::string> inputs;      // texts of the chosen formulas
  StepOutcome outcome = StepOutcome::Top;
  std::string formula;                  // result text, NewFormula only
  std::uint64_t elapsed_ms = 0;
};

enum class TraceStatus { Refuted, Exhausted };

struct ProofTrace {
  HeuristicConfig config;
  std::string instance;              // descriptive; serialized system for MUB runs
  std::vector<std::string> initial;  // initial pool formula texts
  std::string pool_hash;             // fnv1a-64 over instance and initial texts
  std::vector<StepRecord> records;
  TraceStatus status = TraceStatus::Exhausted;

  std::size_t creation_steps() const;
};

// Interface the refuter drives; matches eliminate() from qe.hpp. An external
// engine can be wired in through this.
using QeBackend = std::function<QeResult(const FormulaPtr&, const std::set<VarId>&,
                                         VarTable&, const Budget&)>;
QeBackend internal_backend();

// Single heuristic steps. Both draw from rng, run the backend under the step
// timeout (clipped to hard_deadline when one is set), and append to the pool
// exactly when the outcome is NewFormula. The caller assigns the index.
StepRecord creation_step(Pool& pool, VarTable& names, const HeuristicConfig& cfg,
                         SplitMix& rng, const QeBackend& backend,
                         std::chrono::steady_clock::time_point hard_deadline =
                             std::chrono::steady_clock::time_point::max());
StepRecord resolution_step(Pool& pool, VarTable& names, const HeuristicConfig& cfg,
                           SplitMix& rng, const QeBackend& backend,
                           std::chrono::steady_clock::time_point hard_deadline =
                               std::chrono::steady_clock::time_point::max());

// Full run over an arbitrary initial pool. instance is a free-form
// description stored in the trace.
ProofTrace refute_pool(const std::vector<FormulaPtr>& initial, VarTable& names,
                       const HeuristicConfig& cfg, const std::string& instance,
                       const QeBackend& backend = internal_backend());

// Full run over a MUB system: the pool is the nonzero equations plus the
// side conditions, the instance is the system serialization. The name table
// grows during elimination, hence the non-const system.
ProofTrace refute(MubSystem& sys, const HeuristicConfig& cfg,
                  const QeBackend& backend = internal_backend());

// Line-delimited JSON: a header object, one object per step, one trailing
// status object. normalized zeroes the elapsed-time fields, which are the
// only bytes two identical runs can disagree on.
std::string serialize_trace(const ProofTrace& trace, bool normalized = false);
// Throws std::invalid_argument on malformed input.
ProofTrace parse_trace(const std::string& text);

struct TraceCheck {
  bool ok = true;
  std::size_t step = 0;  // failing record index; 0 for header-level problems
  std::string message;
};

// Independent revalidation: rebuilds the pool from the recorded texts,
// re-derives every step's draws from its seed snapshot, re-runs the
// eliminations under per_step, and checks outcome agreement. Recorded
// new-formula results are compared semantically (closed biconditional when
// few enough variables are involved, point sampling otherwise); Bot steps
// must reproduce exactly. Timed-out records carry no result and only their
// draws are checked.
TraceCheck check_trace(const ProofTrace& trace, const Budget& per_step,
                       const QeBackend& backend = internal_backend());

}  // namespace mubqe

#endif
