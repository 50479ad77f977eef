// Formula nodes, builders with constant folding, and the structural helpers
// (ordering, free variables, substitution).
#include "mubqe/formula.hpp"

#include <type_traits>

namespace mubqe {

Rel negate_rel(Rel r) {
  switch (r) {
    case Rel::Eq: return Rel::Ne;
    case Rel::Ne: return Rel::Eq;
    case Rel::Lt: return Rel::Ge;
    case Rel::Le: return Rel::Gt;
    case Rel::Gt: return Rel::Le;
    case Rel::Ge: return Rel::Lt;
  }
  throw std::logic_error("bad Rel");
}

Rel mirror_rel(Rel r) {
  switch (r) {
    case Rel::Eq: return Rel::Eq;
    case Rel::Ne: return Rel::Ne;
    case Rel::Lt: return Rel::Gt;
    case Rel::Le: return Rel::Ge;
    case Rel::Gt: return Rel::Lt;
    case Rel::Ge: return Rel::Le;
  }
  throw std::logic_error("bad Rel");
}

bool rel_holds(Rel r, int s) {
  switch (r) {
    case Rel::Eq: return s == 0;
    case Rel::Ne: return s != 0;
    case Rel::Lt: return s < 0;
    case Rel::Le: return s <= 0;
    case Rel::Gt: return s > 0;
    case Rel::Ge: return s >= 0;
  }
  throw std::logic_error("bad Rel");
}

const char* rel_symbol(Rel r) {
  switch (r) {
    case Rel::Eq: return "=";
    case Rel::Ne: return "!=";
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Gt: return ">";
    case Rel::Ge: return ">=";
  }
  throw std::logic_error("bad Rel");
}

const Poly& Formula::lhs() const {
  if (kind_ != FKind::Atom) throw std::logic_error("lhs() on non-atom");
  return lhs_;
}

Rel Formula::rel() const {
  if (kind_ != FKind::Atom) throw std::logic_error("rel() on non-atom");
  return rel_;
}

const FormulaPtr& Formula::child() const {
  if (kind_ != FKind::Not && kind_ != FKind::Exists && kind_ != FKind::Forall)
    throw std::logic_error("child() on wrong node kind");
  return a_;
}

const FormulaPtr& Formula::left() const {
  if (kind_ != FKind::And && kind_ != FKind::Or && kind_ != FKind::Implies)
    throw std::logic_error("left() on wrong node kind");
  return a_;
}

const FormulaPtr& Formula::right() const {
  if (kind_ != FKind::And && kind_ != FKind::Or && kind_ != FKind::Implies)
    throw std::logic_error("right() on wrong node kind");
  return b_;
}

VarId Formula::var() const {
  if (kind_ != FKind::Exists && kind_ != FKind::Forall)
    throw std::logic_error("var() on non-quantifier");
  return var_;
}

FormulaPtr f_true() {
  static const FormulaPtr t(new Formula(FKind::True));
  return t;
}

FormulaPtr f_false() {
  static const FormulaPtr f(new Formula(FKind::False));
  return f;
}

FormulaPtr f_atom(Poly lhs, Rel rel) {
  if (lhs.is_constant())
    return rel_holds(rel, sgn(lhs.constant_value())) ? f_true() : f_false();
  auto [norm, factor] = lhs.primitive_normal();
  if (sgn(factor) < 0) rel = mirror_rel(rel);
  Formula* n = new Formula(FKind::Atom);
  n->lhs_ = std::move(norm);
  n->rel_ = rel;
  return FormulaPtr(n);
}

FormulaPtr f_not(FormulaPtr f) {
  switch (f->kind()) {
    case FKind::True: return f_false();
    case FKind::False: return f_true();
    case FKind::Atom: return f_atom(f->lhs(), negate_rel(f->rel()));
    case FKind::Not: return f->child();
    default: break;
  }
  Formula* n = new Formula(FKind::Not);
  n->a_ = std::move(f);
  return FormulaPtr(n);
}

FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  if (a->kind() == FKind::False || b->kind() == FKind::True) return a;
  if (b->kind() == FKind::False || a->kind() == FKind::True) return b;
  if (a.get() == b.get()) return a;
  Formula* n = new Formula(FKind::And);
  n->a_ = std::move(a);
  n->b_ = std::move(b);
  return FormulaPtr(n);
}

FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  if (a->kind() == FKind::True || b->kind() == FKind::False) return a;
  if (b->kind() == FKind::True || a->kind() == FKind::False) return b;
  if (a.get() == b.get()) return a;
  Formula* n = new Formula(FKind::Or);
  n->a_ = std::move(a);
  n->b_ = std::move(b);
  return FormulaPtr(n);
}

FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
  if (a->kind() == FKind::False || b->kind() == FKind::True) return f_true();
  if (a->kind() == FKind::True) return b;
  if (b->kind() == FKind::False) return f_not(std::move(a));
  Formula* n = new Formula(FKind::Implies);
  n->a_ = std::move(a);
  n->b_ = std::move(b);
  return FormulaPtr(n);
}

// Free occurrence test that respects shadowing quantifiers.
static bool mentions_free(const FormulaPtr& f, VarId v) {
  switch (f->kind()) {
    case FKind::True:
    case FKind::False: return false;
    case FKind::Atom: return f->lhs().mentions(v);
    case FKind::Not: return mentions_free(f->child(), v);
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
      return mentions_free(f->left(), v) || mentions_free(f->right(), v);
    case FKind::Exists:
    case FKind::Forall:
      return f->var() != v && mentions_free(f->child(), v);
  }
  throw std::logic_error("bad FKind");
}

FormulaPtr f_exists(VarId v, FormulaPtr body) {
  if (body->kind() == FKind::True || body->kind() == FKind::False) return body;
  if (!mentions_free(body, v)) return body;
  Formula* n = new Formula(FKind::Exists);
  n->var_ = v;
  n->a_ = std::move(body);
  return FormulaPtr(n);
}

FormulaPtr f_forall(VarId v, FormulaPtr body) {
  if (body->kind() == FKind::True || body->kind() == FKind::False) return body;
  if (!mentions_free(body, v)) return body;
  Formula* n = new Formula(FKind::Forall);
  n->var_ = v;
  n->a_ = std::move(body);
  return FormulaPtr(n);
}

FormulaPtr f_and_all(const std::vector<FormulaPtr>& fs) {
  FormulaPtr acc = f_true();
  for (const auto& f : fs) acc = f_and(std::move(acc), f);
  return acc;
}

FormulaPtr f_or_all(const std::vector<FormulaPtr>& fs) {
  FormulaPtr acc = f_false();
  for (const auto& f : fs) acc = f_or(std::move(acc), f);
  return acc;
}

int compare(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind() != b->kind()) return a->kind() < b->kind() ? -1 : 1;
  switch (a->kind()) {
    case FKind::True:
    case FKind::False: return 0;
    case FKind::Atom:
      if (a->rel() != b->rel()) return a->rel() < b->rel() ? -1 : 1;
      return a->lhs().compare(b->lhs());
    case FKind::Not: return compare(a->child(), b->child());
    case FKind::And:
    case FKind::Or:
    case FKind::Implies: {
      int c = compare(a->left(), b->left());
      return c != 0 ? c : compare(a->right(), b->right());
    }
    case FKind::Exists:
    case FKind::Forall:
      if (a->var() != b->var()) return a->var() < b->var() ? -1 : 1;
      return compare(a->child(), b->child());
  }
  throw std::logic_error("bad FKind");
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) { return compare(a, b) == 0; }

static void collect_free(const FormulaPtr& f, std::set<VarId>& bound, std::set<VarId>& out) {
  switch (f->kind()) {
    case FKind::True:
    case FKind::False: return;
    case FKind::Atom:
      for (VarId v : f->lhs().vars())
        if (!bound.count(v)) out.insert(v);
      return;
    case FKind::Not:
      collect_free(f->child(), bound, out);
      return;
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
      collect_free(f->left(), bound, out);
      collect_free(f->right(), bound, out);
      return;
    case FKind::Exists:
    case FKind::Forall: {
      bool added = bound.insert(f->var()).second;
      collect_free(f->child(), bound, out);
      if (added) bound.erase(f->var());
      return;
    }
  }
  throw std::logic_error("bad FKind");
}

std::set<VarId> free_vars(const FormulaPtr& f) {
  std::set<VarId> bound, out;
  collect_free(f, bound, out);
  return out;
}

bool is_quantifier_free(const FormulaPtr& f) {
  switch (f->kind()) {
    case FKind::True:
    case FKind::False:
    case FKind::Atom: return true;
    case FKind::Not: return is_quantifier_free(f->child());
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
      return is_quantifier_free(f->left()) && is_quantifier_free(f->right());
    case FKind::Exists:
    case FKind::Forall: return false;
  }
  throw std::logic_error("bad FKind");
}

std::size_t formula_node_count(const FormulaPtr& f) {
  switch (f->kind()) {
    case FKind::True:
    case FKind::False:
    case FKind::Atom: return 1;
    case FKind::Not:
    case FKind::Exists:
    case FKind::Forall: return 1 + formula_node_count(f->child());
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
      return 1 + formula_node_count(f->left()) + formula_node_count(f->right());
  }
  throw std::logic_error("bad FKind");
}

template <typename Value>
static FormulaPtr subst_impl(const FormulaPtr& f, VarId v, const Value& value, bool check_capture) {
  switch (f->kind()) {
    case FKind::True:
    case FKind::False: return f;
    case FKind::Atom: return f_atom(f->lhs().subst(v, value), f->rel());
    case FKind::Not: return f_not(subst_impl(f->child(), v, value, check_capture));
    case FKind::And:
      return f_and(subst_impl(f->left(), v, value, check_capture),
                   subst_impl(f->right(), v, value, check_capture));
    case FKind::Or:
      return f_or(subst_impl(f->left(), v, value, check_capture),
                  subst_impl(f->right(), v, value, check_capture));
    case FKind::Implies:
      return f_implies(subst_impl(f->left(), v, value, check_capture),
                       subst_impl(f->right(), v, value, check_capture));
    case FKind::Exists:
    case FKind::Forall: {
      if (f->var() == v) return f;  // occurrences below are bound
      if (check_capture) {
        if constexpr (std::is_same_v<Value, Poly>) {
          if (value.mentions(f->var()))
            throw std::logic_error("substitution would capture a bound variable");
        }
      }
      FormulaPtr body = subst_impl(f->child(), v, value, check_capture);
      return f->kind() == FKind::Exists ? f_exists(f->var(), std::move(body))
                                        : f_forall(f->var(), std::move(body));
    }
  }
  throw std::logic_error("bad FKind");
}

FormulaPtr subst(const FormulaPtr& f, VarId v, const Rational& value) {
  return subst_impl(f, v, value, false);
}

FormulaPtr subst(const FormulaPtr& f, VarId v, const Poly& value) {
  return subst_impl(f, v, value, true);
}

}  // namespace mubqe
