// Real algebraic numbers: a square-free defining polynomial plus an isolating
// interval, refinable to any precision. Arithmetic goes through resultant
// constructions; sign determination of multivariate polynomials at algebraic
// points combines interval refinement with an exact zero test, so every
// answer is proved, never approximated.
#ifndef MUBQE_REALALG_HPP
#define MUBQE_REALALG_HPP

#include <map>
#include <string>
#include <vector>

#include "mubqe/unipoly.hpp"

namespace mubqe {

class RealAlgebraic {
 public:
  // The number 0.
  RealAlgebraic();
  static RealAlgebraic from_rational(const Rational& r);
  // A root of `defining` isolated by `iv`. With trusted=false the polynomial
  // is made square-free and the interval is verified to contain exactly one
  // root; internal callers that already guarantee both may skip the check.
  static RealAlgebraic from_root(UniPoly defining, Interval iv, bool trusted = false);

  bool is_rational() const { return iv_.is_point(); }
  // Requires is_rational().
  const Rational& rational_value() const;
  const UniPoly& defining() const { return defining_; }
  const Interval& interval() const { return iv_; }

  // Bisection refinement; the represented number never changes.
  void refine();
  void refine_below(const Rational& eps);

  int sign() const;
  int compare(const RealAlgebraic& o) const;
  friend bool operator==(const RealAlgebraic& a, const RealAlgebraic& b) { return a.compare(b) == 0; }
  friend bool operator!=(const RealAlgebraic& a, const RealAlgebraic& b) { return a.compare(b) != 0; }
  friend bool operator<(const RealAlgebraic& a, const RealAlgebraic& b) { return a.compare(b) < 0; }

  RealAlgebraic operator-() const;
  RealAlgebraic plus(const RealAlgebraic& o) const;
  RealAlgebraic times(const RealAlgebraic& o) const;
  RealAlgebraic plus_rational(const Rational& r) const;
  RealAlgebraic times_rational(const Rational& r) const;

  // Structural identity (same representation), cheaper than compare; used to
  // collapse repeated coordinates before sign evaluation.
  bool same_representation(const RealAlgebraic& o) const;

  std::string to_string() const;

 private:
  UniPoly defining_;  // square-free, integer-primitive, positive leading coeff
  Interval iv_;       // exactly one root inside; point interval <=> rational
};

// All real roots of p in increasing order.
std::vector<RealAlgebraic> real_roots(const UniPoly& p);

// Exact interval arithmetic: encloses p over the box. Every variable of p
// must have an entry.
Interval interval_eval(const Poly& p, const std::map<std::uint32_t, Interval>& box);

// p with every listed coordinate reduced modulo its defining polynomial
// (rational coordinates are substituted outright). Value at the point is
// unchanged; degrees drop below the defining degrees.
Poly reduce_mod_defining(Poly p, const std::vector<VarId>& vars,
                         const std::vector<RealAlgebraic>& point);

// Exact sign of p at the algebraic point; vars[i] is the variable bound to
// point[i]. The overload without vars binds p's variables in ascending index
// order.
int alg_sign(const Poly& p, const std::vector<RealAlgebraic>& point,
             const std::vector<VarId>& vars);
int alg_sign(const Poly& p, const std::vector<RealAlgebraic>& point);

}  // namespace mubqe

#endif
