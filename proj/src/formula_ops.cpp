// Semantic operations on formulas: exact evaluation at algebraic points,
// negation normal form, and prenex conversion with renaming apart.
#include "mubqe/formula.hpp"

namespace mubqe {

bool evaluate(const FormulaPtr& f, const Valuation& val) {
  switch (f->kind()) {
    case FKind::True: return true;
    case FKind::False: return false;
    case FKind::Atom: {
      std::vector<VarId> vars;
      std::vector<RealAlgebraic> point;
      for (VarId v : f->lhs().vars()) {
        auto it = val.find(v);
        if (it == val.end())
          throw std::invalid_argument("unbound free variable (index " +
                                      std::to_string(v.index) + ")");
        vars.push_back(v);
        point.push_back(it->second);
      }
      return rel_holds(f->rel(), alg_sign(f->lhs(), point, vars));
    }
    case FKind::Not: return !evaluate(f->child(), val);
    case FKind::And: return evaluate(f->left(), val) && evaluate(f->right(), val);
    case FKind::Or: return evaluate(f->left(), val) || evaluate(f->right(), val);
    case FKind::Implies: return !evaluate(f->left(), val) || evaluate(f->right(), val);
    case FKind::Exists:
    case FKind::Forall:
      throw std::logic_error("evaluate called on a quantified formula");
  }
  throw std::logic_error("bad FKind");
}

namespace {

FormulaPtr nnf_pos(const FormulaPtr& f);
FormulaPtr nnf_neg(const FormulaPtr& f);

FormulaPtr nnf_pos(const FormulaPtr& f) {
  switch (f->kind()) {
    case FKind::True:
    case FKind::False:
    case FKind::Atom: return f;
    case FKind::Not: return nnf_neg(f->child());
    case FKind::And: return f_and(nnf_pos(f->left()), nnf_pos(f->right()));
    case FKind::Or: return f_or(nnf_pos(f->left()), nnf_pos(f->right()));
    case FKind::Implies: return f_or(nnf_neg(f->left()), nnf_pos(f->right()));
    case FKind::Exists: return f_exists(f->var(), nnf_pos(f->child()));
    case FKind::Forall: return f_forall(f->var(), nnf_pos(f->child()));
  }
  throw std::logic_error("bad FKind");
}

// Negation normal form of "not f".
FormulaPtr nnf_neg(const FormulaPtr& f) {
  switch (f->kind()) {
    case FKind::True: return f_false();
    case FKind::False: return f_true();
    case FKind::Atom: return f_not(f);  // folds into the relation
    case FKind::Not: return nnf_pos(f->child());
    case FKind::And: return f_or(nnf_neg(f->left()), nnf_neg(f->right()));
    case FKind::Or: return f_and(nnf_neg(f->left()), nnf_neg(f->right()));
    case FKind::Implies: return f_and(nnf_pos(f->left()), nnf_neg(f->right()));
    case FKind::Exists: return f_forall(f->var(), nnf_neg(f->child()));
    case FKind::Forall: return f_exists(f->var(), nnf_neg(f->child()));
  }
  throw std::logic_error("bad FKind");
}

// Moves every quantifier of an NNF formula into `prefix` (outermost first),
// renaming bound variables that collide with anything already in `used`.
FormulaPtr pull_quantifiers(const FormulaPtr& f,
                            std::vector<std::pair<FKind, VarId>>& prefix,
                            std::set<std::uint32_t>& used, VarTable& table) {
  switch (f->kind()) {
    case FKind::True:
    case FKind::False:
    case FKind::Atom: return f;
    case FKind::And:
      return f_and(pull_quantifiers(f->left(), prefix, used, table),
                   pull_quantifiers(f->right(), prefix, used, table));
    case FKind::Or:
      return f_or(pull_quantifiers(f->left(), prefix, used, table),
                  pull_quantifiers(f->right(), prefix, used, table));
    case FKind::Exists:
    case FKind::Forall: {
      VarId x = f->var();
      FormulaPtr body = f->child();
      if (used.count(x.index)) {
        VarId nx = table.fresh(table.name_of(x));
        body = subst(body, x, Poly::var(nx));
        x = nx;
      }
      used.insert(x.index);
      prefix.emplace_back(f->kind(), x);
      return pull_quantifiers(body, prefix, used, table);
    }
    case FKind::Not:
    case FKind::Implies:
      throw std::logic_error("non-NNF node while pulling quantifiers");
  }
  throw std::logic_error("bad FKind");
}

}  // namespace

FormulaPtr to_nnf(const FormulaPtr& f) { return nnf_pos(f); }

FormulaPtr to_prenex(const FormulaPtr& f, VarTable& table) {
  FormulaPtr n = to_nnf(f);
  std::set<std::uint32_t> used;
  for (VarId v : free_vars(n)) used.insert(v.index);
  std::vector<std::pair<FKind, VarId>> prefix;
  FormulaPtr matrix = pull_quantifiers(n, prefix, used, table);
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    matrix = it->first == FKind::Exists ? f_exists(it->second, std::move(matrix))
                                        : f_forall(it->second, std::move(matrix));
  return matrix;
}

}  // namespace mubqe
