// Quantifier elimination over the reals on top of the CAD machinery.
// decide() settles closed sentences; eliminate() rewrites a formula into an
// equivalent disjunction of polynomial sign conditions on the remaining
// free variables. Both are exact and deterministic.
#ifndef MUBQE_QE_HPP
#define MUBQE_QE_HPP

#include <set>

#include "mubqe/cad.hpp"
#include "mubqe/formula.hpp"

namespace mubqe {

enum class QeOutcome { Formula, True, False, TimedOut, BudgetExceeded };

const char* qe_outcome_name(QeOutcome o);

struct QeResult {
  QeOutcome outcome;
  FormulaPtr formula;  // set exactly when outcome == Formula

  bool decided() const { return outcome != QeOutcome::TimedOut && outcome != QeOutcome::BudgetExceeded; }
};

// Truth of a sentence over the reals. Budget exhaustion is an outcome, not
// an exception; a larger budget can only turn TimedOut / BudgetExceeded
// into an answer, never change one.
QeResult decide(const FormulaPtr& sentence, VarTable& names, const Budget& budget);

// Quantifier-free equivalent of (E vars) f. Free occurrences of vars are
// wrapped existentially; quantifiers already inside f (universal ones
// included) are honored as written. The result's free variables are
// free(f) minus vars; when nothing stays free the outcome is True / False.
QeResult eliminate(const FormulaPtr& f, const std::set<VarId>& vars, VarTable& names,
                   const Budget& budget);

}  // namespace mubqe

#endif
