#include "mubqe/complexpoly.hpp"

namespace mubqe {

ComplexVarPair intern_complex(VarTable& table, const std::string& name) {
  ComplexVarPair p;
  p.complex_name = name;
  p.re = table.intern(name + "0");
  p.im = table.intern(name + "1");
  if (p.re == p.im) throw std::logic_error("complex variable parts collapsed");
  return p;
}

ComplexExpr ComplexExpr::constant(const Rational& c) {
  ComplexExpr e;
  e.re_ = Poly(c);
  return e;
}

ComplexExpr ComplexExpr::make(Poly re, Poly im) {
  ComplexExpr e;
  e.re_ = std::move(re);
  e.im_ = std::move(im);
  return e;
}

ComplexExpr ComplexExpr::var(const ComplexVarPair& z) {
  return make(Poly::var(z.re), Poly::var(z.im));
}

ComplexExpr ComplexExpr::operator+(const ComplexExpr& o) const {
  return make(re_ + o.re_, im_ + o.im_);
}

ComplexExpr ComplexExpr::operator-(const ComplexExpr& o) const {
  return make(re_ - o.re_, im_ - o.im_);
}

ComplexExpr ComplexExpr::operator*(const ComplexExpr& o) const {
  return make(re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_);
}

ComplexExpr ComplexExpr::conj() const { return make(re_, -im_); }

Poly ComplexExpr::mod_squared() const { return re_ * re_ + im_ * im_; }

ComplexExpr inner_product(const std::vector<ComplexExpr>& v,
                          const std::vector<ComplexExpr>& w) {
  if (v.size() != w.size())
    throw std::invalid_argument("inner product of vectors of different length");
  ComplexExpr acc;
  for (std::size_t i = 0; i < v.size(); ++i) acc = acc + v[i] * w[i].conj();
  return acc;
}

FormulaPtr complex_eq(const ComplexExpr& a, const ComplexExpr& b) {
  ComplexExpr d = a - b;
  return f_and(f_atom(d.re(), Rel::Eq), f_atom(d.im(), Rel::Eq));
}

FormulaPtr modulus_cmp(const ComplexExpr& a, Rel rel, const Rational& bound) {
  if (sgn(bound) < 0) {
    // |a| >= 0 > bound, so the comparison is decided by the relation alone.
    bool holds = rel == Rel::Gt || rel == Rel::Ge || rel == Rel::Ne;
    return holds ? f_true() : f_false();
  }
  return f_atom(a.mod_squared() - Poly(bound * bound), rel);
}

}  // namespace mubqe
