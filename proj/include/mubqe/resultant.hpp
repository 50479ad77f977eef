// Resultants, discriminants and principal subresultant coefficients for
// multivariate polynomials, plus the multivariate gcd needed for squarefree
// parts. Sign conventions follow the Sylvester matrix determinant, so
// resultant(x - a, x - b, x) = a - b and discriminant(x^2 - 2, x) = 8.
#ifndef MUBQE_RESULTANT_HPP
#define MUBQE_RESULTANT_HPP

#include <utility>
#include <vector>

#include "mubqe/poly.hpp"

namespace mubqe {

// Pseudo-division in v: lc(g)^(deg f - deg g + 1) * f = q*g + r with
// deg_v r < deg_v g. Requires deg_v g >= 0 and g nonzero.
std::pair<Poly, Poly> pseudo_divrem(const Poly& f, const Poly& g, VarId v);
Poly prem(const Poly& f, const Poly& g, VarId v);

// Both inputs must have positive degree in elim; throws
// std::invalid_argument("not-a-polynomial-in-variable") otherwise.
Poly resultant(const Poly& p, const Poly& q, VarId elim);

// (-1)^(n(n-1)/2) * resultant(p, dp/dv, v) / lc_v(p) with n = deg_v p.
// Requires n >= 2.
Poly discriminant(const Poly& p, VarId v);

// Principal subresultant coefficients psc_0 .. psc_{min(deg)-1} in elim.
// psc_0 is exactly the Sylvester resultant. Both inputs must have positive
// degree in elim.
std::vector<Poly> subresultants(const Poly& p, const Poly& q, VarId elim);

// Resultant without the degree preconditions; degenerate degrees follow the
// usual conventions (res of two v-constants is 1, res(c, g) = c^deg(g)).
// Internal entry point for the algebraic-number machinery.
Poly resultant_any(const Poly& p, const Poly& q, VarId elim);

// Fraction-free (Bareiss) determinant over the polynomial ring.
Poly det_bareiss(std::vector<std::vector<Poly>> m);

// Content of p as a polynomial in v: gcd of the v-coefficients.
Poly content_in(const Poly& p, VarId v);
Poly primitive_part_in(const Poly& p, VarId v);

// Multivariate gcd, integer-primitive with positive leading coefficient.
// Any nonzero constant input gives 1 (constants are units over the
// rationals); gcd(0, b) = normalized b.
Poly gcd(const Poly& a, const Poly& b);

// p with repeated factors involving v removed: p / gcd(p, dp/dv), normalized.
Poly squarefree_part(const Poly& p, VarId v);

}  // namespace mubqe

#endif
