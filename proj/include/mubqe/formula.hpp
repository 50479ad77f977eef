// First-order formulas over the ordered ring of the reals. Atoms compare a
// polynomial against zero; all six order relations are primitive, so the
// negation of an atom is again an atom. Nodes are immutable and shared.
//
// Construction goes through the f_* builders, which fold constants: an atom
// with a constant left side becomes "true" or "false" outright, and the
// boolean builders absorb those. Code that needs a literal contradiction can
// therefore test for kind() == FKind::False.
#ifndef MUBQE_FORMULA_HPP
#define MUBQE_FORMULA_HPP

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mubqe/poly.hpp"
#include "mubqe/realalg.hpp"

namespace mubqe {

enum class Rel { Eq, Ne, Lt, Le, Gt, Ge };

// Relation satisfied exactly when `r` is not.
Rel negate_rel(Rel r);
// Relation after the left side is multiplied by -1 (Lt <-> Gt, Le <-> Ge).
Rel mirror_rel(Rel r);
// Whether "s rel 0" holds for a sign s in {-1, 0, +1}.
bool rel_holds(Rel r, int s);
// Text form: "=", "!=", "<", "<=", ">", ">=".
const char* rel_symbol(Rel r);

enum class FKind { True, False, Atom, Not, And, Or, Implies, Exists, Forall };

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
 public:
  FKind kind() const { return kind_; }

  // Atom parts. The left side is nonconstant, integer-primitive, with a
  // positive leading coefficient; the right side is always 0.
  const Poly& lhs() const;
  Rel rel() const;

  // Child of Not and of the quantifiers.
  const FormulaPtr& child() const;
  // Children of And, Or, Implies.
  const FormulaPtr& left() const;
  const FormulaPtr& right() const;
  // Bound variable of Exists and Forall.
  VarId var() const;

 private:
  explicit Formula(FKind k) : kind_(k) {}

  FKind kind_;
  Poly lhs_;
  Rel rel_ = Rel::Eq;
  FormulaPtr a_, b_;
  VarId var_{0};

  friend FormulaPtr f_true();
  friend FormulaPtr f_false();
  friend FormulaPtr f_atom(Poly lhs, Rel rel);
  friend FormulaPtr f_not(FormulaPtr f);
  friend FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
  friend FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
  friend FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
  friend FormulaPtr f_exists(VarId v, FormulaPtr body);
  friend FormulaPtr f_forall(VarId v, FormulaPtr body);
};

FormulaPtr f_true();
FormulaPtr f_false();
// "lhs rel 0". The polynomial is normalized to integer-primitive form with a
// positive leading coefficient (mirroring the relation when the sign flips),
// and a constant left side folds to true/false.
FormulaPtr f_atom(Poly lhs, Rel rel);
// Folds constants, negates atoms in place, and cancels double negation.
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
// Quantifiers over a constant or over a variable the body never mentions
// collapse to the body.
FormulaPtr f_exists(VarId v, FormulaPtr body);
FormulaPtr f_forall(VarId v, FormulaPtr body);
// Conjunction / disjunction of a whole list; empty lists give true / false.
FormulaPtr f_and_all(const std::vector<FormulaPtr>& fs);
FormulaPtr f_or_all(const std::vector<FormulaPtr>& fs);

// Total order compatible with structural equality; usable as a set key.
int compare(const FormulaPtr& a, const FormulaPtr& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);

std::set<VarId> free_vars(const FormulaPtr& f);
bool is_quantifier_free(const FormulaPtr& f);
// Nodes in the tree; a cheap size measure for budget caps.
std::size_t formula_node_count(const FormulaPtr& f);

// Substitute `value` for free occurrences of v. The polynomial overload
// requires that no variable of `value` is bound anywhere in f (capture).
FormulaPtr subst(const FormulaPtr& f, VarId v, const Rational& value);
FormulaPtr subst(const FormulaPtr& f, VarId v, const Poly& value);

// --- text format -----------------------------------------------------------
//
//   term    := rational | ident | term ("+"|"-"|"*") term | term "^" nat
//            | "-" term | "(" term ")"
//   atom    := term rel term          rel in  =  !=  <  <=  >  >=
//   formula := "true" | "false" | atom | "~" formula
//            | formula "/\" formula | formula "\/" formula
//            | formula "->" formula
//            | "(" "E" ident ")" formula | "(" "A" ident ")" formula
//            | "(" formula ")"
//
// Rationals are "p/q" or integer literals; whitespace is insignificant.
// Binding, tightest first: ~, /\, \/, -> (right associative). A quantifier
// scopes as far right as possible.

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(const std::string& what, int line_, int col_)
      : std::runtime_error(what + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
        line(line_), col(col_) {}
};

// Identifiers are interned into `table`; with allow_new_vars = false an
// identifier not already present is an "unknown identifier" error.
FormulaPtr parse_formula(const std::string& text, VarTable& table, bool allow_new_vars = true);
Poly parse_term(const std::string& text, VarTable& table, bool allow_new_vars = true);
// Deterministic canonical text; parsing it back yields an equal formula.
std::string print_formula(const FormulaPtr& f, const VarTable& table);

// --- semantic operations ---------------------------------------------------

using Valuation = std::map<VarId, RealAlgebraic>;

// Truth value of a quantifier-free formula under exact sign computation.
// Throws std::invalid_argument on an unbound free variable and
// std::logic_error on a quantifier.
bool evaluate(const FormulaPtr& f, const Valuation& v);

// Negation normal form: implications rewritten, negations pushed onto atoms
// (where they are absorbed), quantifiers dualized as they are crossed.
FormulaPtr to_nnf(const FormulaPtr& f);

// Prenex form: all quantifiers in front of a quantifier-free matrix in
// negation normal form. Bound variables are renamed apart (fresh names from
// `table`) so they are distinct from one another and from the free variables.
FormulaPtr to_prenex(const FormulaPtr& f, VarTable& table);

}  // namespace mubqe

#endif
