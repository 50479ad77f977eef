#include "mubqe/cad.hpp"

#include <algorithm>
#include <set>

#include "mubqe/resultant.hpp"

namespace mubqe {

namespace {

// Cooperative budget checks. count_poly is called once per candidate the
// projection produces, before any further work on it.
class Guard {
 public:
  explicit Guard(const Budget& b) : b_(b) {}

  void tick() const {
    if (std::chrono::steady_clock::now() > b_.deadline) throw BudgetExceededError(true);
  }

  void count_poly(const Poly& p) {
    tick();
    if (++produced_ > b_.max_polys) throw BudgetExceededError(false);
    if (p.max_coeff_bits() > b_.max_coeff_bits) throw BudgetExceededError(false);
  }

 private:
  const Budget& b_;
  std::size_t produced_ = 0;
};

}  // namespace

Budget Budget::unbounded() {
  Budget b;
  b.deadline = std::chrono::steady_clock::time_point::max();
  b.max_polys = static_cast<std::size_t>(-1);
  b.max_coeff_bits = static_cast<std::size_t>(-1);
  return b;
}

Budget Budget::with_timeout(std::chrono::milliseconds limit) {
  Budget b = unbounded();
  b.deadline = std::chrono::steady_clock::now() + limit;
  return b;
}

std::size_t VarOrder::level_of(VarId v) const {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == v) return i + 1;
  throw std::invalid_argument("variable not in the CAD order");
}

std::size_t ProjectionSet::total_polys() const {
  std::size_t n = 0;
  for (const auto& lv : levels) n += lv.size();
  return n;
}

bool ProjectionSet::level_contains(std::size_t level, const Poly& p) const {
  const Poly probe = p.primitive_normal().first;
  for (const Poly& q : levels.at(level - 1))
    if (q == probe) return true;
  return false;
}

namespace {

// Builds the level sets. Candidates are normalized (main-variable content
// split off, primitive, squarefree) and refined against resident
// polynomials by gcd splitting, so each still-unprojected level stays
// pairwise coprime; that keeps degrees down and gives factored output like
// {a, 4ac - b^2} instead of their product. Levels that have already been
// projected are frozen: their members must not change anymore, so incoming
// candidates are not split against them.
class LevelBuilder {
 public:
  LevelBuilder(const VarOrder& order, Guard& guard)
      : order_(order), sets_(order.size() + 1), frozen_(order.size() + 1, false), guard_(guard) {}

  void insert(Poly q) {
    std::vector<Poly> work;
    work.push_back(std::move(q));
    while (!work.empty()) {
      Poly t = std::move(work.back());
      work.pop_back();  // before normalize, which may append new work
      t = normalize(std::move(t), work);
      process(std::move(t), work);
    }
  }

  void close_under_derivatives(std::size_t lv) {
    VarId v = order_.vars[lv - 1];
    for (int round = 0; round < 200; ++round) {
      std::vector<Poly> snap(sets_[lv].begin(), sets_[lv].end());
      for (const Poly& p : snap)
        if (p.degree_in(v) >= 1) insert(p.derivative(v));
      if (std::vector<Poly>(sets_[lv].begin(), sets_[lv].end()) == snap) return;
    }
    throw std::logic_error("derivative closure did not stabilize");
  }

  // Collins projection of one level: leading coefficients of the reducta
  // chains, psc chains of each reductum against its derivative, and psc
  // chains of reducta pairs across distinct polynomials. All results are
  // free of the level variable and fall into lower levels.
  void project_level(std::size_t lv) {
    VarId v = order_.vars[lv - 1];
    frozen_[lv] = true;
    std::vector<Poly> basis(sets_[lv].begin(), sets_[lv].end());
    std::vector<std::vector<Poly>> chains;
    for (const Poly& p : basis) {
      std::vector<Poly> chain;
      Poly r = p;
      while (!r.is_zero() && r.degree_in(v) > 0) {
        chain.push_back(r);
        Poly lc = r.leading_coeff_in(v);
        if (lc.is_constant()) {
          r = Poly();  // this leading coefficient never vanishes: chain ends
          break;
        }
        r = r - lc * Poly::var(v, r.degree_in(v));
        insert(std::move(lc));
      }
      // the v-free tail matters when every coefficient above it can vanish
      if (!r.is_zero()) insert(std::move(r));
      chains.push_back(std::move(chain));
    }
    for (std::size_t a = 0; a < basis.size(); ++a) {
      for (const Poly& r : chains[a]) {
        guard_.tick();
        if (r.degree_in(v) >= 2)
          for (Poly& s : subresultants(r, r.derivative(v), v)) insert(std::move(s));
      }
      for (std::size_t b = a + 1; b < basis.size(); ++b)
        for (const Poly& ra : chains[a])
          for (const Poly& rb : chains[b]) {
            guard_.tick();
            for (Poly& s : subresultants(ra, rb, v)) insert(std::move(s));
          }
    }
  }

  std::vector<std::vector<Poly>> take_levels() {
    std::vector<std::vector<Poly>> out;
    for (std::size_t lv = 1; lv <= order_.size(); ++lv)
      out.emplace_back(sets_[lv].begin(), sets_[lv].end());
    return out;
  }

 private:
  // Content in the main variable is split off and queued separately; the
  // returned polynomial is primitive and squarefree in its main variable,
  // or a constant when nothing survives.
  Poly normalize(Poly t, std::vector<Poly>& work) {
    t = t.primitive_normal().first;
    if (t.is_constant()) return t;
    VarId v = order_.vars[main_level(t) - 1];
    Poly cont = content_in(t, v);
    if (!cont.is_constant()) {
      work.push_back(cont);
      t = primitive_part_in(t, v);
    }
    return squarefree_part(t, v);
  }

  void process(Poly t, std::vector<Poly>& work) {
  restart:
    if (t.is_constant()) return;
    guard_.count_poly(t);
    for (std::size_t l = 1; l <= order_.size(); ++l) {
      if (frozen_[l]) continue;
      for (auto it = sets_[l].begin(); it != sets_[l].end(); ++it) {
        const Poly& g = *it;
        Poly h = gcd(t, g);
        if (h.is_constant()) continue;
        if (h == t && h == g) return;  // already present
        if (h == g) {
          // g divides t strictly; peel it off and rescan
          t = normalize(*t.divide_exact(g), work);
          goto restart;
        }
        if (h == t) {
          // t divides g strictly; break g apart and rescan t
          work.push_back(*g.divide_exact(t));
          sets_[l].erase(it);
          goto restart;
        }
        // proper common factor of both
        work.push_back(*g.divide_exact(h));
        work.push_back(h);
        sets_[l].erase(it);
        t = normalize(*t.divide_exact(h), work);
        goto restart;
      }
    }
    sets_[main_level(t)].insert(std::move(t));
  }

  std::size_t main_level(const Poly& t) const {
    std::size_t best = 0;
    for (VarId v : t.vars()) best = std::max(best, order_.level_of(v));
    return best;
  }

  const VarOrder& order_;
  std::vector<std::set<Poly>> sets_;  // sets_[level], level 1-based
  std::vector<bool> frozen_;
  Guard& guard_;
};

}  // namespace

ProjectionSet project(const std::vector<Poly>& polys, const VarOrder& order,
                      const Budget& budget, const ProjectOptions& options) {
  if (order.n_free > order.size()) throw std::invalid_argument("free-variable count exceeds order size");
  DeadlineScope scope(budget.deadline);
  Guard guard(budget);
  LevelBuilder builder(order, guard);
  for (const Poly& p : polys) {
    if (p.is_zero()) throw std::invalid_argument("zero polynomial in projection input");
    for (VarId v : p.vars()) order.level_of(v);  // rejects out-of-order variables
    if (!p.is_constant()) builder.insert(p);
  }
  for (std::size_t lv = order.size(); lv >= 2; --lv) {
    if (lv <= options.closure_levels) builder.close_under_derivatives(lv);
    builder.project_level(lv);
  }
  if (options.closure_levels >= 1 && order.size() >= 1) builder.close_under_derivatives(1);
  ProjectionSet out;
  out.order = order;
  out.levels = builder.take_levels();
  return out;
}

namespace {

Rational below_rat(const RealAlgebraic& r) {
  return r.is_rational() ? r.rational_value() - 1 : r.interval().lo;
}

Rational above_rat(const RealAlgebraic& r) {
  return r.is_rational() ? r.rational_value() + 1 : r.interval().hi;
}

// A rational strictly between a and b; requires a < b.
Rational rational_between(RealAlgebraic a, RealAlgebraic b) {
  auto hi = [](const RealAlgebraic& x) { return x.is_rational() ? x.rational_value() : x.interval().hi; };
  auto lo = [](const RealAlgebraic& x) { return x.is_rational() ? x.rational_value() : x.interval().lo; };
  while (!(hi(a) < lo(b))) {
    a.refine();
    b.refine();
  }
  return (hi(a) + lo(b)) / 2;
}

// Real roots of the level polynomial p on the fiber over the base point.
// Candidates come from iterated resultants against the coordinates'
// defining polynomials, then get filtered by an exact sign test.
std::vector<RealAlgebraic> fiber_roots(const Poly& p, VarId y,
                                       const std::vector<VarId>& base_vars,
                                       const std::vector<RealAlgebraic>& base, Guard& guard) {
  std::vector<Poly> cs = p.coeffs_in(y);
  int eff = -1;
  for (int i = static_cast<int>(cs.size()) - 1; i >= 1; --i) {
    if (cs[i].is_zero()) continue;
    guard.tick();
    if (alg_sign(cs[i], base, base_vars) != 0) {
      eff = i;
      break;
    }
  }
  if (eff < 1) return {};  // constant or identically zero on this fiber
  Poly q = Poly::from_coeffs(std::vector<Poly>(cs.begin(), cs.begin() + eff + 1), y);

  std::vector<VarId> used;
  std::vector<RealAlgebraic> vals;
  bool all_rational = true;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (!q.mentions(base_vars[i])) continue;
    used.push_back(base_vars[i]);
    vals.push_back(base[i]);
    all_rational = all_rational && base[i].is_rational();
  }
  q = reduce_mod_defining(std::move(q), used, vals);

  for (std::size_t i = 0; i < used.size(); ++i) {
    if (vals[i].is_rational() || !q.mentions(used[i])) continue;
    Poly m = vals[i].defining().to_poly(used[i]);
    while (true) {
      guard.tick();
      Poly r = resultant(m, q, used[i]);
      if (!r.is_zero()) {
        q = std::move(r);
        break;
      }
      // m shares a factor with q; a factor not vanishing at the coordinate
      // can be peeled off, anything else would starve the candidate set
      Poly g = gcd(m, q);
      if (alg_sign(g, {vals[i]}, {used[i]}) == 0) throw std::logic_error("degenerate lifting stack");
      m = m.divide_exact(g)->primitive_normal().first;
    }
  }

  std::vector<RealAlgebraic> candidates = real_roots(UniPoly::from_poly(q, y));
  if (all_rational) return candidates;

  std::vector<VarId> full_vars = base_vars;
  full_vars.push_back(y);
  std::vector<RealAlgebraic> out;
  for (RealAlgebraic& c : candidates) {
    std::vector<RealAlgebraic> pt = base;
    pt.push_back(c);
    guard.tick();
    if (alg_sign(p, pt, full_vars) == 0) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

Stack lift_stack(const ProjectionSet& proj, std::size_t level,
                 const std::vector<RealAlgebraic>& base, const Budget& budget) {
  if (level == 0 || level > proj.order.size()) throw std::invalid_argument("lift level out of range");
  if (base.size() + 1 != level) throw std::invalid_argument("base sample has the wrong length");
  DeadlineScope scope(budget.deadline);
  Guard guard(budget);
  VarId y = proj.order.vars[level - 1];
  std::vector<VarId> base_vars(proj.order.vars.begin(), proj.order.vars.begin() + level - 1);

  std::vector<RealAlgebraic> sections;
  for (const Poly& p : proj.levels[level - 1])
    for (RealAlgebraic& r : fiber_roots(p, y, base_vars, base, guard)) sections.push_back(std::move(r));
  std::sort(sections.begin(), sections.end(),
            [](const RealAlgebraic& a, const RealAlgebraic& b) { return a.compare(b) < 0; });
  sections.erase(std::unique(sections.begin(), sections.end(),
                             [](const RealAlgebraic& a, const RealAlgebraic& b) {
                               return a.compare(b) == 0;
                             }),
                 sections.end());

  Stack st;
  if (sections.empty()) {
    st.points.emplace_back();  // the whole line; 0 will do as a sample
    return st;
  }
  st.points.push_back(RealAlgebraic::from_rational(below_rat(sections.front())));
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (i + 1 < sections.size()) {
      Rational mid = rational_between(sections[i], sections[i + 1]);
      st.points.push_back(std::move(sections[i]));
      st.points.push_back(RealAlgebraic::from_rational(mid));
    } else {
      Rational top = above_rat(sections[i]);
      st.points.push_back(std::move(sections[i]));
      st.points.push_back(RealAlgebraic::from_rational(top));
    }
  }
  return st;
}

namespace {

void grow(const ProjectionSet& proj, CadCell* cell, const Budget& budget, Guard& guard) {
  if (cell->level == proj.order.size()) return;
  Stack st = lift_stack(proj, cell->level + 1, cell->sample, budget);
  std::vector<VarId> vars(proj.order.vars.begin(), proj.order.vars.begin() + cell->level + 1);
  for (std::size_t i = 0; i < st.points.size(); ++i) {
    guard.tick();
    auto child = std::make_unique<CadCell>();
    child->level = cell->level + 1;
    child->section = st.is_section(i);
    child->sample = cell->sample;
    child->sample.push_back(st.points[i]);
    child->parent = cell;
    for (const Poly& p : proj.levels[cell->level])
      child->signs.push_back(alg_sign(p, child->sample, vars));
    grow(proj, child.get(), budget, guard);
    cell->children.push_back(std::move(child));
  }
}

void collect_leaves(const CadCell* cell, std::size_t depth, std::vector<const CadCell*>& out) {
  if (cell->level == depth) {
    out.push_back(cell);
    return;
  }
  for (const auto& c : cell->children) collect_leaves(c.get(), depth, out);
}

}  // namespace

CadTree build_cad(const ProjectionSet& proj, const Budget& budget) {
  DeadlineScope scope(budget.deadline);
  Guard guard(budget);
  CadTree tree;
  tree.proj = proj;
  tree.root = std::make_unique<CadCell>();
  grow(tree.proj, tree.root.get(), budget, guard);
  return tree;
}

std::vector<const CadCell*> CadTree::leaves() const {
  std::vector<const CadCell*> out;
  collect_leaves(root.get(), proj.order.size(), out);
  return out;
}

std::size_t CadTree::leaf_count() const { return leaves().size(); }

}  // namespace mubqe
