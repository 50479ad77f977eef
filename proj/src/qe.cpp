#include "mubqe/qe.hpp"

#include <algorithm>
#include <map>

namespace mubqe {

const char* qe_outcome_name(QeOutcome o) {
  switch (o) {
    case QeOutcome::Formula: return "formula";
    case QeOutcome::True: return "true";
    case QeOutcome::False: return "false";
    case QeOutcome::TimedOut: return "timeout";
    case QeOutcome::BudgetExceeded: return "budget";
  }
  throw std::logic_error("unhandled outcome");
}

namespace {

using QuantPrefix = std::vector<std::pair<FKind, VarId>>;  // outermost first

std::pair<QuantPrefix, FormulaPtr> split_prenex(FormulaPtr f) {
  QuantPrefix prefix;
  while (f->kind() == FKind::Exists || f->kind() == FKind::Forall) {
    prefix.emplace_back(f->kind(), f->var());
    f = f->child();
  }
  return {std::move(prefix), std::move(f)};
}

void collect_conjuncts(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind() == FKind::And) {
    collect_conjuncts(f->left(), out);
    collect_conjuncts(f->right(), out);
  } else {
    out.push_back(f);
  }
}

void collect_disjuncts(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind() == FKind::Or) {
    collect_disjuncts(f->left(), out);
    collect_disjuncts(f->right(), out);
  } else {
    out.push_back(f);
  }
}

// Distributes a conjunction of disjunctive normal forms into one disjunctive
// normal form, so eliminate keeps its output shape after component splitting.
// Duplicate atoms within a conjunction and duplicate conjunctions are dropped.
FormulaPtr conjoin_dnf(const std::vector<FormulaPtr>& parts) {
  std::vector<std::vector<FormulaPtr>> sum{{}};
  for (const FormulaPtr& part : parts) {
    if (part->kind() == FKind::True) continue;
    if (part->kind() == FKind::False) return f_false();
    std::vector<FormulaPtr> disjuncts;
    collect_disjuncts(part, disjuncts);
    std::vector<std::vector<FormulaPtr>> next;
    for (const auto& sofar : sum) {
      for (const FormulaPtr& d : disjuncts) {
        std::vector<FormulaPtr> atoms;
        collect_conjuncts(d, atoms);
        std::vector<FormulaPtr> merged = sofar;
        for (const FormulaPtr& a : atoms) {
          bool dup = false;
          for (const FormulaPtr& b : merged) dup = dup || equal(a, b);
          if (!dup) merged.push_back(a);
        }
        next.push_back(std::move(merged));
      }
    }
    sum = std::move(next);
  }
  std::vector<FormulaPtr> conjunctions;
  for (auto& atoms : sum) {
    FormulaPtr c = f_and_all(atoms);
    bool dup = false;
    for (const FormulaPtr& k : conjunctions) dup = dup || equal(c, k);
    if (!dup) conjunctions.push_back(std::move(c));
  }
  return f_or_all(conjunctions);
}

// (E v)(c*v + r = 0 /\ phi) with rational c != 0 collapses to
// phi[v := -r/c], provided r mentions nothing bound further inside. Applied
// repeatedly; a cheap but large win on equation systems.
void substitute_linear(QuantPrefix& prefix, FormulaPtr& matrix) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<FormulaPtr> conj;
    conj.clear();
    if (matrix->kind() == FKind::True || matrix->kind() == FKind::False) return;
    collect_conjuncts(matrix, conj);
    for (std::size_t i = prefix.size(); i-- > 0 && !changed;) {
      if (prefix[i].first != FKind::Exists) continue;
      VarId v = prefix[i].second;
      std::set<VarId> inner;
      for (std::size_t j = i + 1; j < prefix.size(); ++j) inner.insert(prefix[j].second);
      for (std::size_t a = 0; a < conj.size(); ++a) {
        const FormulaPtr& atom = conj[a];
        if (atom->kind() != FKind::Atom || atom->rel() != Rel::Eq) continue;
        const Poly& lhs = atom->lhs();
        if (lhs.degree_in(v) != 1) continue;
        Poly c = lhs.coeff_of(v, 1);
        if (!c.is_constant()) continue;
        Poly rest = lhs.subst(v, Rational(0));
        bool ok = true;
        for (VarId w : rest.vars())
          if (inner.count(w)) ok = false;
        if (!ok) continue;
        Poly value = rest.scaled(Rational(-1) / c.constant_value());
        std::vector<FormulaPtr> kept;
        for (std::size_t b = 0; b < conj.size(); ++b)
          if (b != a) kept.push_back(conj[b]);
        matrix = subst(f_and_all(kept), v, value);
        prefix.erase(prefix.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
}

void drop_unused(QuantPrefix& prefix, const FormulaPtr& matrix) {
  std::set<VarId> used = free_vars(matrix);
  QuantPrefix kept;
  for (auto& q : prefix)
    if (used.count(q.second)) kept.push_back(q);
  prefix = std::move(kept);
}

Rel rel_of_sign(int s) { return s < 0 ? Rel::Lt : s > 0 ? Rel::Gt : Rel::Eq; }

// One CAD run for a prenex block. Returns a quantifier-free formula over
// the free variables (True / False when none are left).
FormulaPtr qe_core(const QuantPrefix& prefix_in, const FormulaPtr& matrix, const Budget& budget) {
  if (matrix->kind() == FKind::True || matrix->kind() == FKind::False) return matrix;

  // occurrence counts steer the variable order; atoms containing a variable
  // are counted once each
  std::set<Poly> poly_set;
  std::map<VarId, std::size_t> occ;
  {
    std::vector<FormulaPtr> stack{matrix};
    while (!stack.empty()) {
      FormulaPtr f = stack.back();
      stack.pop_back();
      switch (f->kind()) {
        case FKind::Atom:
          poly_set.insert(f->lhs());
          for (VarId v : f->lhs().vars()) ++occ[v];
          break;
        case FKind::And:
        case FKind::Or:
          stack.push_back(f->left());
          stack.push_back(f->right());
          break;
        default:
          throw std::logic_error("matrix is not quantifier-free normal");
      }
    }
  }

  std::set<VarId> bound;
  for (auto& q : prefix_in) bound.insert(q.second);
  std::vector<VarId> free_order;
  for (auto& [v, n] : occ)
    if (!bound.count(v)) free_order.push_back(v);
  auto by_occ = [&occ](VarId a, VarId b) {
    if (occ[a] != occ[b]) return occ[a] < occ[b];
    return a.index < b.index;
  };
  std::stable_sort(free_order.begin(), free_order.end(), by_occ);

  // quantifiers of the same kind commute, so each maximal block is sorted
  // by the same heuristic; blocks keep their order, outermost lowest
  QuantPrefix prefix = prefix_in;
  for (std::size_t i = 0; i < prefix.size();) {
    std::size_t j = i;
    while (j < prefix.size() && prefix[j].first == prefix[i].first) ++j;
    std::vector<VarId> block;
    for (std::size_t k = i; k < j; ++k) block.push_back(prefix[k].second);
    std::stable_sort(block.begin(), block.end(), by_occ);
    for (std::size_t k = i; k < j; ++k) prefix[k].second = block[k - i];
    i = j;
  }

  VarOrder order;
  order.vars = free_order;
  order.n_free = free_order.size();
  for (auto& q : prefix) order.vars.push_back(q.second);

  ProjectOptions opts;
  opts.closure_levels = order.n_free;
  ProjectionSet proj =
      project(std::vector<Poly>(poly_set.begin(), poly_set.end()), order, budget, opts);

  const std::size_t n = order.size();
  const std::size_t k = order.n_free;

  // truth of the quantified suffix over one base sample, with short-circuit
  auto eval_from = [&](auto&& self, std::vector<RealAlgebraic>& sample) -> bool {
    std::size_t level = sample.size();
    if (level == n) {
      Valuation val;
      for (std::size_t i = 0; i < n; ++i) val.emplace(order.vars[i], sample[i]);
      return evaluate(matrix, val);
    }
    FKind kind = prefix[level - k].first;
    Stack st = lift_stack(proj, level + 1, sample, budget);
    for (std::size_t i = 0; i < st.points.size(); ++i) {
      sample.push_back(st.points[i]);
      bool t = self(self, sample);
      sample.pop_back();
      if (kind == FKind::Exists && t) return true;
      if (kind == FKind::Forall && !t) return false;
    }
    return kind == FKind::Forall;
  };

  if (k == 0) {
    std::vector<RealAlgebraic> sample;
    return eval_from(eval_from, sample) ? f_true() : f_false();
  }

  // base phase: materialize every cell of R^k with its sign vector
  std::vector<Poly> base_polys;
  std::vector<VarId> base_vars(order.vars.begin(), order.vars.begin() + k);
  for (std::size_t lv = 1; lv <= k; ++lv)
    for (const Poly& p : proj.levels[lv - 1]) base_polys.push_back(p);

  struct BaseCell {
    std::vector<int> signs;
    bool truth;
  };
  std::vector<BaseCell> cells;
  auto enumerate = [&](auto&& self, std::vector<RealAlgebraic>& sample) -> void {
    if (sample.size() == k) {
      BaseCell cell;
      for (const Poly& p : base_polys) cell.signs.push_back(alg_sign(p, sample, base_vars));
      cell.truth = eval_from(eval_from, sample);
      cells.push_back(std::move(cell));
      return;
    }
    Stack st = lift_stack(proj, sample.size() + 1, sample, budget);
    for (std::size_t i = 0; i < st.points.size(); ++i) {
      sample.push_back(st.points[i]);
      self(self, sample);
      sample.pop_back();
    }
  };
  std::vector<RealAlgebraic> sample;
  enumerate(enumerate, sample);

  std::vector<const BaseCell*> on, off;
  for (const BaseCell& c : cells) (c.truth ? on : off).push_back(&c);
  if (on.empty()) return f_false();
  if (off.empty()) return f_true();

  // describe each true cell by sign conditions that exclude every false
  // cell, greedily picking the condition that rules out the most
  std::vector<FormulaPtr> conjunctions;
  std::vector<std::vector<std::pair<std::size_t, int>>> picked;  // (poly index, sign)
  for (const BaseCell* t : on) {
    std::vector<const BaseCell*> remaining = off;
    std::vector<std::pair<std::size_t, int>> chosen;
    while (!remaining.empty()) {
      std::size_t best = base_polys.size();
      std::size_t best_kill = 0;
      for (std::size_t idx = 0; idx < base_polys.size(); ++idx) {
        std::size_t kill = 0;
        for (const BaseCell* f : remaining)
          if (f->signs[idx] != t->signs[idx]) ++kill;
        if (kill > best_kill) {
          best_kill = kill;
          best = idx;
        }
      }
      if (best == base_polys.size())
        throw std::logic_error("cells with equal sign vectors disagree on truth");
      chosen.emplace_back(best, t->signs[best]);
      std::vector<const BaseCell*> next;
      for (const BaseCell* f : remaining)
        if (f->signs[best] == t->signs[best]) next.push_back(f);
      remaining = std::move(next);
    }
    std::sort(chosen.begin(), chosen.end());
    picked.push_back(chosen);
  }

  // a conjunction covers any true cell matching its signs; drop duplicates
  // and conjunctions whose covered cells are covered elsewhere
  auto covers = [&](const std::vector<std::pair<std::size_t, int>>& sel, const BaseCell* c) {
    for (auto& [idx, s] : sel)
      if (c->signs[idx] != s) return false;
    return true;
  };
  std::vector<bool> keep(picked.size(), true);
  for (std::size_t a = 0; a < picked.size(); ++a)
    for (std::size_t b = 0; b < a && keep[a]; ++b)
      if (keep[b] && picked[a] == picked[b]) keep[a] = false;
  for (std::size_t a = picked.size(); a-- > 0;) {
    if (!keep[a]) continue;
    keep[a] = false;
    bool redundant = true;
    for (std::size_t t = 0; t < on.size() && redundant; ++t) {
      if (!covers(picked[a], on[t])) continue;
      bool elsewhere = false;
      for (std::size_t b = 0; b < picked.size() && !elsewhere; ++b)
        if (keep[b] && covers(picked[b], on[t])) elsewhere = true;
      if (!elsewhere) redundant = false;
    }
    keep[a] = !redundant;
  }
  for (std::size_t a = 0; a < picked.size(); ++a) {
    if (!keep[a]) continue;
    std::vector<FormulaPtr> atoms;
    for (auto& [idx, s] : picked[a]) atoms.push_back(f_atom(base_polys[idx], rel_of_sign(s)));
    conjunctions.push_back(f_and_all(atoms));
  }
  return f_or_all(conjunctions);
}

FormulaPtr qe_top(QuantPrefix prefix, FormulaPtr matrix, const Budget& budget);

// (E V)(F1 /\ ... /\ Fm) splits along the connected components of the
// conjunct/variable incidence graph restricted to quantified variables; each
// component is solved on its own, conjuncts without quantified variables
// pass through. Components are solved smallest variable set first, so a
// contradiction in a cheap component surfaces before an expensive one can
// eat the budget. This is what makes sparse equation systems tractable.
FormulaPtr split_components(const QuantPrefix& prefix, const FormulaPtr& matrix,
                            const Budget& budget) {
  std::vector<FormulaPtr> conj;
  collect_conjuncts(matrix, conj);
  std::vector<std::set<VarId>> cvars(conj.size());
  for (std::size_t i = 0; i < conj.size(); ++i) cvars[i] = free_vars(conj[i]);
  std::set<VarId> bound;
  for (auto& q : prefix) bound.insert(q.second);

  // union-find over conjuncts through shared quantified variables
  std::vector<std::size_t> parent(conj.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<VarId, std::size_t> first_conjunct;
  for (std::size_t i = 0; i < conj.size(); ++i) {
    for (VarId v : cvars[i]) {
      if (!bound.count(v)) continue;
      auto [it, fresh] = first_conjunct.emplace(v, i);
      if (!fresh) parent[find(i)] = find(it->second);
    }
  }

  std::map<std::size_t, std::vector<FormulaPtr>> groups;
  std::vector<FormulaPtr> residue;
  for (std::size_t i = 0; i < conj.size(); ++i) {
    bool quantified = false;
    for (VarId v : cvars[i])
      if (bound.count(v)) quantified = true;
    if (quantified)
      groups[find(i)].push_back(conj[i]);
    else
      residue.push_back(conj[i]);
  }

  std::vector<std::pair<std::size_t, std::vector<FormulaPtr>>> ordered;
  for (auto& [root, members] : groups) ordered.emplace_back(root, std::move(members));
  std::vector<std::size_t> group_width(ordered.size());
  for (std::size_t g = 0; g < ordered.size(); ++g) {
    std::set<VarId> span;
    for (const FormulaPtr& m : ordered[g].second)
      for (VarId v : free_vars(m)) span.insert(v);
    group_width[g] = span.size();
  }
  std::vector<std::size_t> by_size(ordered.size());
  for (std::size_t g = 0; g < by_size.size(); ++g) by_size[g] = g;
  std::stable_sort(by_size.begin(), by_size.end(), [&](std::size_t a, std::size_t b) {
    if (group_width[a] != group_width[b]) return group_width[a] < group_width[b];
    return ordered[a].first < ordered[b].first;
  });

  std::vector<FormulaPtr> parts = residue;
  for (std::size_t g : by_size) {
    FormulaPtr sub = f_and_all(ordered[g].second);
    std::set<VarId> sub_vars = free_vars(sub);
    QuantPrefix sub_prefix;
    for (auto& q : prefix)
      if (sub_vars.count(q.second)) sub_prefix.push_back(q);
    FormulaPtr solved = ordered.size() == 1 && residue.empty()
                            ? qe_core(sub_prefix, sub, budget)
                            : qe_top(std::move(sub_prefix), std::move(sub), budget);
    if (solved->kind() == FKind::False) return f_false();
    parts.push_back(std::move(solved));
  }
  return conjoin_dnf(parts);
}

FormulaPtr qe_top(QuantPrefix prefix, FormulaPtr matrix, const Budget& budget) {
  substitute_linear(prefix, matrix);
  if (matrix->kind() == FKind::True || matrix->kind() == FKind::False) return matrix;
  drop_unused(prefix, matrix);
  bool all_exists = !prefix.empty();
  for (auto& q : prefix)
    if (q.first != FKind::Exists) all_exists = false;
  if (all_exists && matrix->kind() == FKind::And) return split_components(prefix, matrix, budget);
  return qe_core(prefix, matrix, budget);
}

QeResult run(const FormulaPtr& g, VarTable& names, const Budget& budget, bool sentence) {
  try {
    DeadlineScope scope(budget.deadline);
    auto [prefix, matrix] = split_prenex(to_prenex(g, names));
    FormulaPtr out = qe_top(std::move(prefix), std::move(matrix), budget);
    if (sentence) {
      if (out->kind() != FKind::True && out->kind() != FKind::False)
        throw std::logic_error("sentence did not reduce to a truth value");
      return {out->kind() == FKind::True ? QeOutcome::True : QeOutcome::False, nullptr};
    }
    return {QeOutcome::Formula, std::move(out)};
  } catch (const BudgetExceededError& e) {
    return {e.timed_out() ? QeOutcome::TimedOut : QeOutcome::BudgetExceeded, nullptr};
  }
}

}  // namespace

QeResult decide(const FormulaPtr& sentence, VarTable& names, const Budget& budget) {
  if (!free_vars(sentence).empty()) throw std::invalid_argument("decide needs a closed sentence");
  return run(sentence, names, budget, /*sentence=*/true);
}

QeResult eliminate(const FormulaPtr& f, const std::set<VarId>& vars, VarTable& names,
                   const Budget& budget) {
  std::set<VarId> free = free_vars(f);
  FormulaPtr g = f;
  for (auto it = vars.rbegin(); it != vars.rend(); ++it)
    if (free.count(*it)) g = f_exists(*it, g);
  bool closed = true;
  for (VarId v : free)
    if (!vars.count(v)) closed = false;
  return run(g, names, budget, closed);
}

}  // namespace mubqe
