// Sparse multivariate polynomials with exact rational coefficients.
//
// Terms are kept in canonical graded-lexicographic order (total degree first,
// ties broken lexicographically with the lowest VarId index most significant).
// No zero coefficient is ever stored, so structural equality is semantic
// equality.
#ifndef MUBQE_POLY_HPP
#define MUBQE_POLY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mubqe/numeric.hpp"
#include "mubqe/vartable.hpp"

namespace mubqe {

// Sparse exponent vector: sorted by variable index, exponents > 0.
struct Monomial {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> exps;

  unsigned total_degree() const;
  unsigned degree_of(VarId v) const;
  bool empty() const { return exps.empty(); }

  Monomial times(const Monomial& other) const;
  // Removes v entirely; returns the removed exponent.
  std::pair<Monomial, unsigned> without(VarId v) const;

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps == b.exps; }
};

// Graded-lex "greater" so that map iteration starts at the leading term.
struct MonoGrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class Poly {
 public:
  using TermMap = std::map<Monomial, Rational, MonoGrlexGreater>;

  Poly() = default;
  explicit Poly(const Rational& c);
  static Poly var(VarId v, unsigned exp = 1);
  static Poly constant(const Rational& c) { return Poly(c); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
  // Requires is_constant().
  Rational constant_value() const;

  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  unsigned total_degree() const;
  unsigned degree_in(VarId v) const;
  std::set<VarId> vars() const;
  bool mentions(VarId v) const;

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);

  Poly scaled(const Rational& c) const;
  Poly pow(unsigned e) const;

  Poly derivative(VarId v) const;

  // Coefficient of v^k, a polynomial in the remaining variables.
  Poly coeff_of(VarId v, unsigned k) const;
  // Dense coefficient list [c0, c1, ..., c_deg] in v.
  std::vector<Poly> coeffs_in(VarId v) const;
  static Poly from_coeffs(const std::vector<Poly>& coeffs, VarId v);
  Poly leading_coeff_in(VarId v) const { return coeff_of(v, degree_in(v)); }

  Poly subst(VarId v, const Rational& value) const;
  Poly subst(VarId v, const Poly& value) const;
  // Renames variables according to `map` (old index -> new id). Unmapped
  // variables are kept.
  Poly rename(const std::map<std::uint32_t, VarId>& map) const;

  Rational eval(const std::map<std::uint32_t, Rational>& point) const;

  // Exact quotient; nullopt if o does not divide *this.
  std::optional<Poly> divide_exact(const Poly& o) const;

  // Integer-primitive normalization: multiplies by the unique positive
  // rational that makes all coefficients integers with gcd 1 and the leading
  // coefficient positive. Returns the normalized polynomial and the factor f
  // with normalized = f * this (f > 0 or f < 0 when the sign flipped).
  std::pair<Poly, Rational> primitive_normal() const;

  // Rational content: positive rational c with this = c * (integer-primitive
  // poly whose leading coefficient keeps this's leading sign).
  Rational content() const;

  std::size_t max_coeff_bits() const;

  // Total order compatible with equality; usable as a map key.
  int compare(const Poly& o) const;
  friend bool operator==(const Poly& a, const Poly& b) { return a.compare(b) == 0; }
  friend bool operator!=(const Poly& a, const Poly& b) { return a.compare(b) != 0; }
  friend bool operator<(const Poly& a, const Poly& b) { return a.compare(b) < 0; }

  std::string to_string(const VarTable& table) const;

  void add_term(const Monomial& m, const Rational& c);

 private:
  TermMap terms_;
};

}  // namespace mubqe

#endif
