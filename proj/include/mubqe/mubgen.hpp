// Exact polynomial systems for "k mutually unbiased bases in dimension d".
//
// Basis m (0-based) consists of d unit vectors with d complex components
// each. The conditions are, for vectors u, w taken from the bases:
//   same basis:      <u|w> = delta_uw          (normalization / orthogonality)
//   different bases: |<u|w>|^2 = 1/d           (unbiasedness)
// expanded over paired real variables. Cross-vector conditions are emitted in
// the squared-modulus form Re^2 + Im^2 = rhs; normalization of a vector is
// the real equation sum_j (re_j^2 + im_j^2) = 1.
//
// Symmetry reductions fix the first basis to the canonical one, the phase of
// every remaining vector (imaginary part of the first component = 0), and
// the first components themselves to 1/sqrt(d). The irrational 1/sqrt(d) is
// handled in one of two ways: by default those entries only ever occur in
// even powers, which are replaced exactly by powers of 1/d, keeping every
// coefficient rational; alternatively (use_symbolic_sqrt, or as an automatic
// fallback if an odd power survives) the value stays as the variable r{d}
// constrained by d*r^2 = 1 and r > 0.
#ifndef MUBQE_MUBGEN_HPP
#define MUBQE_MUBGEN_HPP

#include <optional>
#include <string>
#include <vector>

#include "mubqe/complexpoly.hpp"
#include "mubqe/formula.hpp"

namespace mubqe {

struct ReductionConfig {
  bool fix_first_basis_canonical = true;
  bool fix_phases = true;
  bool fix_first_components = true;
  bool prune_trivial_equations = false;
  // Keep 1/sqrt(d) as the constrained variable r{d} instead of eliminating
  // its even powers.
  bool use_symbolic_sqrt = false;
};

struct MubInstance {
  unsigned k = 1;
  unsigned d = 1;
  ReductionConfig reductions;
};

enum class EqKind { Normalization, Orthogonality, Unbiasedness };
const char* eq_kind_name(EqKind k);
EqKind eq_kind_from_name(const std::string& name);

struct MubEquation {
  std::size_t id;  // stable identifier within one system
  EqKind kind;
  // The kets involved, 0-based; both refer to the same ket for normalization.
  // basis == k denotes the adjoined unbiased vector of a relaxed system.
  unsigned basis_a, vec_a, basis_b, vec_b;
  // Equation is lhs = 0; a zero polynomial is a trivially true equation
  // (kept unless pruning is enabled).
  Poly lhs;
};

struct MubSystem {
  MubInstance instance;
  VarTable names;                   // every registered display name, by index
  std::vector<VarId> free_vars;     // unfixed coordinates, generation order
  // (basis, vec) owning each free variable, aligned with free_vars; the sqrt
  // variable uses basis 0xffffffff and the adjoined vector uses basis k.
  // Empty after parse_mub_system of a relaxed system, which then cannot be
  // truncated further.
  std::vector<std::pair<unsigned, unsigned>> free_var_owner;
  std::vector<MubEquation> equations;
  // r{d} constraints when the sqrt variable is kept symbolic.
  std::vector<FormulaPtr> side_conditions;
  bool sqrt_symbolic = false;
  std::optional<VarId> sqrt_id;     // r{d}, registered iff first components fixed
  bool relaxed = false;

  // Exact value of component j of vector i of basis m, as a complex
  // expression over the variables (fixed coordinates are constants; fixed
  // first components reference r{d}). Empty when the system was read back
  // from a relaxed serialization.
  std::vector<ComplexExpr> components;
  // Components of the adjoined unbiased vector, when one was added.
  std::vector<ComplexExpr> extra_vector;

  unsigned k() const { return instance.k; }
  unsigned d() const { return instance.d; }
  unsigned unreduced_real_var_count() const { return 2 * k() * d() * d(); }
  unsigned complex_var_count() const { return k() * d() * d(); }
  std::size_t trivial_equation_count() const;
  bool has_components() const { return !components.empty(); }
  const ComplexExpr& component(unsigned m, unsigned i, unsigned j) const;
};

// Builds the full system for the instance. Throws std::invalid_argument when
// the reduction flags are inconsistent (fixing first components requires the
// canonical first basis and fixed phases).
MubSystem generate_system(const MubInstance& inst);

// Prenex existential sentence: E x1 ... E xn (all equations and side
// conditions). Closed; trivially true equations fold away.
FormulaPtr to_sentence(const MubSystem& sys);

// Relaxation of an existing system, applied in this order: bases truncated
// to the given vector counts (equations whose kets survive are kept, with
// their ids), listed equations dropped, and optionally one extra vector
// that must be unbiased with respect to every surviving ket (its d complex
// components are fresh unreduced variables v{j}{0|1}).
struct RelaxSpec {
  std::vector<unsigned> truncate_bases;  // size k, counts <= d; empty = keep all
  std::vector<std::size_t> drop_equation_ids;
  bool add_unbiased_vector = false;
};
MubSystem generate_relaxed(const MubSystem& sys, const RelaxSpec& spec);

// Cost-model evaluation of L * log2(L) * log2(log2(L)) * (m*deg)^n as a
// base-10 exponent. Purely informational; this value feeds no decision.
struct RenegarParams {
  unsigned long L;    // coefficient bit length, >= 4
  unsigned long m;    // number of polynomials
  unsigned long deg;  // total degree
  unsigned long n;    // number of variables (n = 0 drops the last factor)
};
double estimate_renegar(const RenegarParams& p);

// Plain-text serialization: header lines (k, d, flags, variable names, free
// variables), then one "eq <id> <kind> <basis_a> <vec_a> <basis_b> <vec_b> :
// <lhs> = 0" line per equation with the lhs in canonical grammar. Stable
// across runs. Reading reconstructs components except for relaxed systems.
std::string serialize_mub_system(const MubSystem& sys);
MubSystem parse_mub_system(const std::string& text);

}  // namespace mubqe

#endif
