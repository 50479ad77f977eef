// Complex polynomial expressions kept as exact real and imaginary parts.
// A complex variable z is identified with the pair of real variables z0
// (real part) and z1 (imaginary part); the supported operations are rational
// constants, +, -, *, conjugation, and modulus squared, which is all the MUB
// conditions need and exactly what translates to polynomial arithmetic over
// the paired real variables.
#ifndef MUBQE_COMPLEXPOLY_HPP
#define MUBQE_COMPLEXPOLY_HPP

#include <string>
#include <vector>

#include "mubqe/formula.hpp"
#include "mubqe/poly.hpp"

namespace mubqe {

struct ComplexVarPair {
  std::string complex_name;
  VarId re;
  VarId im;
};

// Registers the pair of real variables for a complex variable `name`,
// suffixing 0 for the real part and 1 for the imaginary part.
ComplexVarPair intern_complex(VarTable& table, const std::string& name);

class ComplexExpr {
 public:
  ComplexExpr() = default;  // zero
  static ComplexExpr constant(const Rational& c);
  static ComplexExpr make(Poly re, Poly im);
  static ComplexExpr var(const ComplexVarPair& z);

  const Poly& re() const { return re_; }
  const Poly& im() const { return im_; }
  bool is_real() const { return im_.is_zero(); }

  ComplexExpr operator+(const ComplexExpr& o) const;
  ComplexExpr operator-(const ComplexExpr& o) const;
  ComplexExpr operator*(const ComplexExpr& o) const;
  ComplexExpr conj() const;
  // |e|^2 = re^2 + im^2, a real polynomial.
  Poly mod_squared() const;

 private:
  Poly re_, im_;
};

// Hermitian inner product, conjugating the second argument: sum v[i]*conj(w[i]).
ComplexExpr inner_product(const std::vector<ComplexExpr>& v,
                          const std::vector<ComplexExpr>& w);

// a = b as a real formula: both parts of a - b vanish.
FormulaPtr complex_eq(const ComplexExpr& a, const ComplexExpr& b);

// |a| rel bound for a rational bound, via the squared comparison
// |a|^2 rel bound^2 (valid since both sides are nonnegative); a negative
// bound folds the formula to a constant.
FormulaPtr modulus_cmp(const ComplexExpr& a, Rel rel, const Rational& bound);

}  // namespace mubqe

#endif
