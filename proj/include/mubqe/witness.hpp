// Exact checking of explicit basis witnesses: entries are complex numbers
// with real algebraic parts, and every condition (normalization within a
// vector, orthogonality within a basis, unbiasedness across bases) is settled
// by an exact sign test. There is no tolerance anywhere; a witness is either
// a set of mutually unbiased bases or it is not.
#ifndef MUBQE_WITNESS_HPP
#define MUBQE_WITNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "mubqe/mubgen.hpp"
#include "mubqe/realalg.hpp"

namespace mubqe {

struct AlgebraicComplex {
  RealAlgebraic re, im;
};

AlgebraicComplex operator-(const AlgebraicComplex& a);
AlgebraicComplex operator+(const AlgebraicComplex& a, const AlgebraicComplex& b);
AlgebraicComplex operator-(const AlgebraicComplex& a, const AlgebraicComplex& b);
AlgebraicComplex operator*(const AlgebraicComplex& a, const AlgebraicComplex& b);
// Throws std::invalid_argument on a zero divisor.
AlgebraicComplex operator/(const AlgebraicComplex& a, const AlgebraicComplex& b);

// bases[m][i][j] is component j of vector i of basis m.
struct BasisSet {
  unsigned d = 0;
  std::vector<std::vector<std::vector<AlgebraicComplex>>> bases;

  unsigned k() const { return static_cast<unsigned>(bases.size()); }
};

// The first condition found to fail, located by the kets involved. The clause
// kinds match the generated equations: Normalization names one ket twice,
// the other two name a genuine pair.
struct Violation {
  EqKind clause = EqKind::Normalization;
  unsigned basis_a = 0, vec_a = 0, basis_b = 0, vec_b = 0;
};

std::string describe(const Violation& v);

struct VerifyReport {
  bool verdict = false;
  std::optional<Violation> violation;
};

// Checks every condition in a fixed order (per basis: normalizations, then
// orthogonality pairs; then unbiasedness pairs across bases in index order)
// and stops at the first failure. Throws std::invalid_argument when the
// shape is wrong: a basis without exactly d vectors, or a vector without
// exactly d entries.
VerifyReport verify_mubs(const BasisSet& b);

// One witness entry. Grammar: integers, i, sqrt(<positive rational>), the
// operators + - * /, unary minus, and parentheses. Rationals are written as
// quotients. Anything else (sqrt of a negative, irrational, or non-real
// argument included) is rejected with std::invalid_argument.
AlgebraicComplex parse_algebraic(const std::string& text);

// Witness file: '#' starts a comment; the first payload line is "k d"; then
// k*d payload lines, each one vector as d comma-separated entries, bases in
// order. Throws std::invalid_argument on shape or entry errors.
BasisSet parse_witness(const std::string& text);

}  // namespace mubqe

#endif
