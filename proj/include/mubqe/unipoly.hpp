// Dense univariate polynomials over the rationals, plus exact real root
// isolation. This is the workhorse under real algebraic numbers and CAD
// lifting, so everything here is exact: no floating point anywhere.
#ifndef MUBQE_UNIPOLY_HPP
#define MUBQE_UNIPOLY_HPP

#include <string>
#include <utility>
#include <vector>

#include "mubqe/numeric.hpp"
#include "mubqe/poly.hpp"

namespace mubqe {

class UniPoly {
 public:
  UniPoly() = default;
  // Coefficient list [c0, c1, ...]; trailing zeros are trimmed.
  explicit UniPoly(std::vector<Rational> coeffs);
  static UniPoly constant(const Rational& c);
  static UniPoly x();

  // Conversion from a Poly that mentions at most the variable v.
  static UniPoly from_poly(const Poly& p, VarId v);
  Poly to_poly(VarId v) const;

  bool is_zero() const { return coeffs_.empty(); }
  // Degree of the zero polynomial is -1.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  Rational coeff(unsigned i) const;
  const Rational& lc() const;
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  UniPoly operator-() const;
  UniPoly operator+(const UniPoly& o) const;
  UniPoly operator-(const UniPoly& o) const;
  UniPoly operator*(const UniPoly& o) const;
  UniPoly scaled(const Rational& c) const;

  UniPoly derivative() const;
  Rational eval(const Rational& x) const;
  int sign_at(const Rational& x) const;

  // Euclidean division; o must be nonzero.
  std::pair<UniPoly, UniPoly> divrem(const UniPoly& o) const;
  UniPoly mod(const UniPoly& o) const;

  UniPoly monic() const;
  // Integer-primitive with positive leading coefficient.
  UniPoly primitive() const;

  UniPoly squarefree_part() const;

  // Strict bound B: every real root x satisfies |x| < B. Integer valued.
  Rational root_bound() const;

  // p(x + t), p(c * x), x^deg * p(1/x). Used by the isolation transforms.
  UniPoly shifted(const Rational& t) const;
  UniPoly scaled_arg(const Rational& c) const;
  UniPoly reversed() const;

  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

UniPoly gcd(const UniPoly& a, const UniPoly& b);

// Closed interval [lo, hi]. A point interval (lo == hi) marks an exact
// rational root; otherwise the tracked root lies strictly inside and the
// defining polynomial has opposite nonzero signs at the two endpoints.
struct Interval {
  Rational lo, hi;
  bool is_point() const { return lo == hi; }
  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
};

// All real roots of p in increasing order, one isolating interval per root.
// p may have repeated factors (the squarefree part is taken internally) but
// must not be the zero polynomial.
std::vector<Interval> isolate_roots(const UniPoly& p);

// Canonical Sturm chain of p: p, p', then negated remainders.
std::vector<UniPoly> sturm_chain(const UniPoly& p);
int sign_variations_at(const std::vector<UniPoly>& chain, const Rational& x);
// Sign variations at +inf (dir > 0) or -inf (dir < 0).
int sign_variations_at_inf(const std::vector<UniPoly>& chain, int dir);
// Number of distinct real roots of the chain's polynomial in (a, b].
int count_roots_in(const std::vector<UniPoly>& chain, const Rational& a, const Rational& b);
int count_real_roots(const UniPoly& p);

// One bisection step. Keeps the isolation invariant; collapses to a point
// interval when the midpoint is an exact root.
void refine_step(const UniPoly& p, Interval& iv);
// Refines until the width is at most eps (or the interval is a point).
void refine_below(const UniPoly& p, Interval& iv, const Rational& eps);

}  // namespace mubqe

#endif
