// Exact arbitrary-precision integers and rationals, backed by GMP.
// Every coefficient in the kernel is a Rational; no floating point enters
// any arithmetic path that feeds a sign decision.
#ifndef MUBQE_NUMERIC_HPP
#define MUBQE_NUMERIC_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mubqe {

using Int = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline int sign_of(const Rational& q) { return sgn(q); }

// "p/q" or plain integer literal; canonicalized, denominator > 0.
Rational parse_rational(const std::string& text);

std::string rational_to_string(const Rational& q);

// Bits needed for the numerator/denominator pair; used by budget caps.
inline std::size_t rational_bits(const Rational& q) {
  return mpz_sizeinbase(q.get_num().get_mpz_t(), 2) +
         mpz_sizeinbase(q.get_den().get_mpz_t(), 2);
}

inline Rational rational_pow(const Rational& q, unsigned e) {
  Rational r(1);
  Rational base = q;
  unsigned k = e;
  while (k > 0) {
    if (k & 1u) r *= base;
    base *= base;
    k >>= 1;
  }
  return r;
}

inline Rational rational_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

}  // namespace mubqe

#endif
