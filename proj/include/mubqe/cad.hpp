// Cylindrical algebraic decomposition. project() computes a Collins
// projection closure for a variable order, lift_stack() builds one stack of
// sections and sectors over an algebraic base point, and build_cad()
// materializes the full cell tree. Everything is exact; budgets cut runs
// short but never change an answer.
#ifndef MUBQE_CAD_HPP
#define MUBQE_CAD_HPP

#include <chrono>
#include <memory>
#include <stdexcept>
#include <vector>

#include "mubqe/deadline.hpp"
#include "mubqe/poly.hpp"
#include "mubqe/realalg.hpp"

namespace mubqe {

// Resource limits for one query: a wall-clock deadline, a cap on the number
// of polynomials a projection may produce, and a cap on coefficient size.
// Checks are cooperative (the deadline also reaches the kernel loops through
// DeadlineScope), so an over-budget call stops a little late but cleanly.
struct Budget {
  std::chrono::steady_clock::time_point deadline;
  std::size_t max_polys;
  std::size_t max_coeff_bits;

  static Budget unbounded();
  static Budget with_timeout(std::chrono::milliseconds limit);
};

// Variable order for a CAD run. vars[0] is level 1 (lifted first); the
// first n_free entries are the free variables, everything after them is
// quantified and therefore projected away first.
struct VarOrder {
  std::vector<VarId> vars;
  std::size_t n_free = 0;

  std::size_t size() const { return vars.size(); }
  // 1-based level; throws std::invalid_argument for a variable not in the
  // order.
  std::size_t level_of(VarId v) const;
};

struct ProjectOptions {
  // Close the lowest closure_levels level sets under main-variable
  // derivatives before projecting them. Required when cells must later be
  // described by sign conditions (formula synthesis); pure decision runs
  // skip it.
  std::size_t closure_levels = 0;
};

// Level sets closed under the Collins operator. levels[i] holds the
// level-(i+1) polynomials: integer-primitive, squarefree in their main
// variable vars[i], pairwise coprime, with every polynomial mentioning only
// vars[0..i].
struct ProjectionSet {
  VarOrder order;
  std::vector<std::vector<Poly>> levels;

  std::size_t total_polys() const;
  bool level_contains(std::size_t level, const Poly& p) const;
};

ProjectionSet project(const std::vector<Poly>& polys, const VarOrder& order,
                      const Budget& budget, const ProjectOptions& options = {});

// One stack over a base sample: points[0], points[2], ... are rational
// sector samples and points[1], points[3], ... are the section points (the
// roots of the level polynomials over the base), in increasing order.
struct Stack {
  std::vector<RealAlgebraic> points;

  std::size_t cell_count() const { return points.size(); }
  std::size_t section_count() const { return points.size() / 2; }
  bool is_section(std::size_t i) const { return i % 2 == 1; }
};

// base must hold level-1 coordinates for levels 1..level-1.
Stack lift_stack(const ProjectionSet& proj, std::size_t level,
                 const std::vector<RealAlgebraic>& base, const Budget& budget);

struct CadCell {
  std::size_t level = 0;  // 0 is the root, which has no coordinates
  bool section = false;   // last coordinate is a root of a level polynomial
  std::vector<RealAlgebraic> sample;
  // Signs of the level polynomials (proj.levels[level-1]) at the sample.
  std::vector<int> signs;
  CadCell* parent = nullptr;
  std::vector<std::unique_ptr<CadCell>> children;
};

struct CadTree {
  ProjectionSet proj;
  std::unique_ptr<CadCell> root;

  std::size_t leaf_count() const;
  std::vector<const CadCell*> leaves() const;
};

// Full decomposition of R^n for n = proj.order.size(). Every projection
// polynomial has constant sign on every cell.
CadTree build_cad(const ProjectionSet& proj, const Budget& budget);

}  // namespace mubqe

#endif
