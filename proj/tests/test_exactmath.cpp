#include "doctest.h"

#include <map>

#include "mubqe/poly.hpp"

#include "test_util.hpp"

using namespace mubqe;
using testutil::Rng;

namespace {

// Evaluation oracle: two polynomials agree iff they agree on enough points.
// For laws we instead check structural equality of both constructions, and
// separately confirm structural equality implies equal evaluations.
Rational eval_at(const Poly& p, const std::vector<VarId>& vars, Rng& rng,
                 std::map<std::uint32_t, Rational>& point_out) {
  point_out.clear();
  for (auto v : vars) point_out[v.index] = testutil::random_rational(rng, 7);
  return p.eval(point_out);
}

}  // namespace

TEST_CASE("rational parsing round trips") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(rational_to_string(Rational(-3, 2)) == "-3/2");
  CHECK(rational_to_string(Rational(5)) == "5");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("monomial ordering is graded lex") {
  VarTable tab;
  VarId x = tab.intern("x"), y = tab.intern("y");
  Poly p = Poly::var(x, 2) + Poly::var(x) * Poly::var(y) + Poly::var(y, 2) +
           Poly::var(x) + Poly(Rational(1));
  std::vector<std::string> seen;
  for (auto& [m, c] : p.terms()) {
    std::string s;
    for (auto& [idx, e] : m.exps) {
      s += tab.name_of(VarId{idx});
      s += std::to_string(e);
    }
    seen.push_back(s.empty() ? "1" : s);
  }
  // Degree 2 terms first, x-heavy before y-heavy, then x, then the constant.
  CHECK(seen == std::vector<std::string>{"x2", "x1y1", "y2", "x1", "1"});
}

TEST_CASE("ring laws hold on random polynomials") {
  VarTable tab;
  std::vector<VarId> vars{tab.intern("x"), tab.intern("y"), tab.intern("z")};
  Rng rng(20240801);
  for (int iter = 0; iter < 1200; ++iter) {
    Poly a = testutil::random_poly(rng, vars);
    Poly b = testutil::random_poly(rng, vars);
    Poly c = testutil::random_poly(rng, vars);

    CHECK(a + b == b + a);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == Poly());
    CHECK(a + Poly() == a);
    CHECK(a * Poly(Rational(1)) == a);
    CHECK(a * Poly() == Poly());
    CHECK(-(-a) == a);

    // Structural equality must match evaluation.
    std::map<std::uint32_t, Rational> pt;
    Rational lhs = eval_at(a * b + c, vars, rng, pt);
    Rational rhs = a.eval(pt) * b.eval(pt) + c.eval(pt);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("degree and variable bookkeeping") {
  VarTable tab;
  VarId x = tab.intern("x"), y = tab.intern("y");
  Poly p = Poly::var(x, 3) * Poly::var(y) - Poly::var(y, 2).scaled(Rational(1, 2));
  CHECK(p.total_degree() == 4);
  CHECK(p.degree_in(x) == 3);
  CHECK(p.degree_in(y) == 2);
  CHECK(p.mentions(x));
  CHECK(p.mentions(y));
  CHECK(!p.mentions(VarId{99}));
  CHECK(p.vars() == std::set<VarId>{x, y});
  CHECK(Poly(Rational(5)).total_degree() == 0);
  CHECK(Poly().total_degree() == 0);
}

TEST_CASE("coefficient extraction round trips") {
  VarTable tab;
  std::vector<VarId> vars{tab.intern("x"), tab.intern("y")};
  Rng rng(7);
  for (int iter = 0; iter < 300; ++iter) {
    Poly p = testutil::random_poly(rng, vars, 6, 4);
    for (auto v : vars) {
      auto cs = p.coeffs_in(v);
      CHECK(Poly::from_coeffs(cs, v) == p);
      if (!p.is_zero()) {
        CHECK(cs.size() == p.degree_in(v) + 1);
        CHECK(p.leading_coeff_in(v) == cs.back());
      }
      for (unsigned k = 0; k < cs.size(); ++k) CHECK(p.coeff_of(v, k) == cs[k]);
    }
  }
}

TEST_CASE("derivative satisfies Leibniz rule") {
  VarTable tab;
  std::vector<VarId> vars{tab.intern("x"), tab.intern("y")};
  VarId x = vars[0];
  Rng rng(11);
  for (int iter = 0; iter < 400; ++iter) {
    Poly a = testutil::random_poly(rng, vars);
    Poly b = testutil::random_poly(rng, vars);
    CHECK((a * b).derivative(x) == a.derivative(x) * b + a * b.derivative(x));
    CHECK((a + b).derivative(x) == a.derivative(x) + b.derivative(x));
  }
  CHECK(Poly::var(x, 3).derivative(x) == Poly::var(x, 2).scaled(Rational(3)));
  CHECK(Poly(Rational(4)).derivative(x) == Poly());
}

TEST_CASE("substitution agrees with evaluation") {
  VarTable tab;
  std::vector<VarId> vars{tab.intern("x"), tab.intern("y")};
  VarId x = vars[0], y = vars[1];
  Rng rng(13);
  for (int iter = 0; iter < 300; ++iter) {
    Poly p = testutil::random_poly(rng, vars, 6, 3);
    Rational vx = testutil::random_rational(rng, 9);
    Poly after = p.subst(x, vx);
    CHECK(!after.mentions(x));
    std::map<std::uint32_t, Rational> pt;
    Rational vy = testutil::random_rational(rng, 9);
    pt[x.index] = vx;
    pt[y.index] = vy;
    CHECK(after.eval({{y.index, vy}}) == p.eval(pt));

    // Polynomial substitution: compose then evaluate.
    Poly q = testutil::random_poly(rng, {y}, 3, 2);
    Poly composed = p.subst(x, q);
    std::map<std::uint32_t, Rational> pt2{{x.index, q.eval({{y.index, vy}})}, {y.index, vy}};
    CHECK(composed.eval({{y.index, vy}}) == p.eval(pt2));
  }
}

TEST_CASE("exact division inverts multiplication") {
  VarTable tab;
  std::vector<VarId> vars{tab.intern("x"), tab.intern("y")};
  Rng rng(17);
  int nontrivial = 0;
  for (int iter = 0; iter < 400; ++iter) {
    Poly a = testutil::random_poly(rng, vars);
    Poly b = testutil::random_poly(rng, vars);
    if (b.is_zero()) continue;
    auto q = (a * b).divide_exact(b);
    REQUIRE(q.has_value());
    CHECK(*q == a);
    if (!a.is_zero()) ++nontrivial;
  }
  CHECK(nontrivial > 100);

  VarId x = vars[0];
  Poly p = Poly::var(x, 2) - Poly(Rational(1));
  CHECK(!p.divide_exact(Poly::var(x) - Poly(Rational(2))).has_value());
  CHECK(!p.divide_exact(Poly()).has_value());
  CHECK(p.divide_exact(Poly::var(x) + Poly(Rational(1))).has_value());
}

TEST_CASE("primitive normalization") {
  VarTable tab;
  VarId x = tab.intern("x"), y = tab.intern("y");
  Poly p = Poly::var(x).scaled(Rational(-4, 6)) + Poly::var(y).scaled(Rational(2, 9));
  auto [norm, f] = p.primitive_normal();
  // -2/3 x + 2/9 y normalizes to 3x - y (leading coefficient positive,
  // integer coefficients, content 1).
  CHECK(norm == Poly::var(x).scaled(Rational(3)) - Poly::var(y));
  CHECK(norm == p.scaled(f));
  CHECK(f < 0);

  auto [zn, zf] = Poly().primitive_normal();
  CHECK(zn.is_zero());
  CHECK(zf == Rational(1));

  Rng rng(23);
  std::vector<VarId> vars{x, y};
  for (int iter = 0; iter < 200; ++iter) {
    Poly q = testutil::random_poly(rng, vars);
    if (q.is_zero()) continue;
    auto [n, factor] = q.primitive_normal();
    CHECK(n == q.scaled(factor));
    CHECK(n.terms().begin()->second > 0);
    CHECK(n.content() == Rational(1));
    // Idempotent.
    CHECK(n.primitive_normal().first == n);
  }
}

TEST_CASE("poly printing uses the formula grammar") {
  VarTable tab;
  VarId x = tab.intern("x"), y = tab.intern("y");
  CHECK(Poly().to_string(tab) == "0");
  CHECK(Poly(Rational(-3, 2)).to_string(tab) == "-3/2");
  Poly p = Poly::var(x, 2).scaled(Rational(2)) - Poly::var(x) * Poly::var(y) +
           Poly(Rational(1, 3));
  CHECK(p.to_string(tab) == "2*x^2 - x*y + 1/3");
  CHECK((-Poly::var(y)).to_string(tab) == "-y");
}

TEST_CASE("poly compare is a total order") {
  VarTable tab;
  std::vector<VarId> vars{tab.intern("x"), tab.intern("y")};
  Rng rng(29);
  for (int iter = 0; iter < 300; ++iter) {
    Poly a = testutil::random_poly(rng, vars);
    Poly b = testutil::random_poly(rng, vars);
    Poly c = testutil::random_poly(rng, vars);
    CHECK(a.compare(a) == 0);
    CHECK(a.compare(b) == -b.compare(a));
    if (a.compare(b) < 0 && b.compare(c) < 0) CHECK(a.compare(c) < 0);
    CHECK((a.compare(b) == 0) == (a == b));
  }
}

#include "mubqe/resultant.hpp"
#include "mubqe/unipoly.hpp"

namespace {

Poly make_x_minus(VarTable& tab, const char* name, const Rational& r) {
  return Poly::var(tab.intern(name)) - Poly(r);
}

}  // namespace

TEST_CASE("resultant matches hand-computed values") {
  VarTable tab;
  VarId x = tab.intern("x"), a = tab.intern("a"), b = tab.intern("b");
  Poly x2 = Poly::var(x, 2);

  CHECK(resultant(x2 - Poly(Rational(2)), x2 - Poly(Rational(3)), x) == Poly(Rational(1)));
  CHECK(resultant(Poly::var(x) - Poly(Rational(1)), Poly::var(x) + Poly(Rational(1)), x) ==
        Poly(Rational(2)));
  // Sylvester convention: resultant(x - a, x - b, x) = a - b.
  CHECK(resultant(Poly::var(x) - Poly::var(a), Poly::var(x) - Poly::var(b), x) ==
        Poly::var(a) - Poly::var(b));

  CHECK_THROWS_AS(resultant(Poly::var(a), Poly::var(x), x), std::invalid_argument);
  CHECK_THROWS_AS(resultant(Poly::var(x), Poly(Rational(3)), x), std::invalid_argument);
}

TEST_CASE("resultant is multiplicative and detects common factors") {
  VarTable tab;
  VarId x = tab.intern("x");
  Rng rng(31);
  std::vector<VarId> vars{x};
  int checked = 0;
  for (int iter = 0; iter < 400; ++iter) {
    Poly p = testutil::random_poly(rng, vars, 3, 3);
    Poly q = testutil::random_poly(rng, vars, 3, 3);
    Poly r = testutil::random_poly(rng, vars, 3, 3);
    if (p.degree_in(x) == 0 || q.degree_in(x) == 0 || r.degree_in(x) == 0) continue;
    CHECK(resultant(p * q, r, x) == resultant(p, r, x) * resultant(q, r, x));

    // Planted common factor forces a zero resultant.
    Poly common = Poly::var(x) - Poly(testutil::random_rational(rng, 5));
    CHECK(resultant(p * common, q * common, x).is_zero());
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("resultant vanishes exactly when the gcd is nonconstant") {
  VarTable tab;
  VarId x = tab.intern("x");
  Rng rng(37);
  std::vector<VarId> vars{x};
  for (int iter = 0; iter < 300; ++iter) {
    Poly p = testutil::random_poly(rng, vars, 3, 3);
    Poly q = testutil::random_poly(rng, vars, 3, 3);
    if (p.degree_in(x) == 0 || q.degree_in(x) == 0) continue;
    bool res_zero = resultant(p, q, x).is_zero();
    bool gcd_nonconst = !gcd(p, q).is_constant();
    CHECK(res_zero == gcd_nonconst);
  }
}

TEST_CASE("discriminant closed forms") {
  VarTable tab;
  VarId x = tab.intern("x"), b = tab.intern("b"), c = tab.intern("c");
  Poly monic_quad = Poly::var(x, 2) + Poly::var(b) * Poly::var(x) + Poly::var(c);
  CHECK(discriminant(monic_quad, x) ==
        Poly::var(b, 2) - Poly::var(c).scaled(Rational(4)));
  CHECK(discriminant(Poly::var(x, 2) - Poly(Rational(2)), x) == Poly(Rational(8)));
  Poly repeated = (Poly::var(x) - Poly(Rational(1))) * (Poly::var(x) - Poly(Rational(1)));
  CHECK(discriminant(repeated, x).is_zero());
  CHECK_THROWS_AS(discriminant(Poly::var(x), x), std::invalid_argument);
}

TEST_CASE("subresultant chain agrees with the resultant at index 0") {
  VarTable tab;
  VarId x = tab.intern("x"), b = tab.intern("b"), c = tab.intern("c");
  Poly x2 = Poly::var(x, 2);

  auto chain = subresultants(x2 - Poly(Rational(2)), x2 - Poly(Rational(3)), x);
  REQUIRE(chain.size() == 2);
  CHECK(chain[0] == Poly(Rational(1)));

  Poly p = x2 + Poly::var(x).scaled(Rational(3)) - Poly(Rational(1));
  CHECK(subresultants(p, p, x)[0].is_zero());

  // psc_0 of (x^2+bx+c, 2x+b) is the Sylvester-signed 4c - b^2.
  Poly monic_quad = x2 + Poly::var(b) * Poly::var(x) + Poly::var(c);
  auto quad_chain = subresultants(monic_quad, monic_quad.derivative(x), x);
  REQUIRE(quad_chain.size() == 1);
  CHECK(quad_chain[0] == Poly::var(c).scaled(Rational(4)) - Poly::var(b, 2));

  // Bareiss determinant path must reproduce the PRS resultant exactly.
  Rng rng(41);
  std::vector<VarId> uv{x};
  int agreed = 0;
  for (int iter = 0; iter < 200; ++iter) {
    Poly f = testutil::random_poly(rng, uv, 4, 4);
    Poly g = testutil::random_poly(rng, uv, 4, 4);
    if (f.degree_in(x) == 0 || g.degree_in(x) == 0) continue;
    CHECK(subresultants(f, g, x)[0] == resultant(f, g, x));
    ++agreed;
  }
  CHECK(agreed > 50);
}

TEST_CASE("multivariate gcd finds planted factors") {
  VarTable tab;
  VarId x = tab.intern("x"), y = tab.intern("y");
  Poly w = Poly::var(x) + Poly::var(y).scaled(Rational(2)) - Poly(Rational(1));
  Poly p = (Poly::var(x) + Poly::var(y)) * w;
  Poly q = (Poly::var(x) - Poly::var(y)) * w;
  CHECK(gcd(p, q) == w.primitive_normal().first);

  CHECK(gcd(Poly(Rational(4)), Poly::var(x).scaled(Rational(6))) == Poly(Rational(1)));
  CHECK(gcd(Poly(), Poly::var(x).scaled(Rational(-2))) == Poly::var(x));

  Rng rng(43);
  std::vector<VarId> vars{x, y};
  for (int iter = 0; iter < 60; ++iter) {
    Poly a = testutil::random_poly(rng, vars, 3, 2);
    Poly b = testutil::random_poly(rng, vars, 3, 2);
    Poly g = testutil::random_poly(rng, vars, 2, 2);
    if (a.is_zero() || b.is_zero() || g.is_constant()) continue;
    Poly d = gcd(a * g, b * g);
    // The planted factor divides the gcd; the gcd divides both products.
    CHECK(d.divide_exact(g.primitive_normal().first).has_value() ==
          (a * g).divide_exact(d).has_value());
    CHECK((a * g).divide_exact(d).has_value());
    CHECK((b * g).divide_exact(d).has_value());
    CHECK(d.divide_exact(g.primitive_normal().first).has_value());
  }
}

TEST_CASE("squarefree part drops repeated factors") {
  VarTable tab;
  VarId x = tab.intern("x"), y = tab.intern("y");
  Poly f1 = Poly::var(x) - Poly(Rational(1));
  Poly f2 = Poly::var(x) + Poly(Rational(2));
  CHECK(squarefree_part(f1 * f1 * f2, x) == (f1 * f2).primitive_normal().first);
  Poly g = Poly::var(x) + Poly::var(y);
  CHECK(squarefree_part(g * g, x) == g);
  CHECK(squarefree_part(f1, x) == f1);
}

TEST_CASE("univariate division and gcd") {
  Rng rng(47);
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<Rational> ac, bc;
    for (int i = 0; i <= static_cast<int>(rng.below(5)); ++i) ac.push_back(testutil::random_rational(rng));
    for (int i = 0; i <= static_cast<int>(rng.below(4)); ++i) bc.push_back(testutil::random_rational(rng));
    UniPoly a(ac), b(bc);
    if (b.is_zero()) continue;
    auto [q, r] = a.divrem(b);
    CHECK(q * b + r == a);
    CHECK(r.degree() < b.degree());
    if (!a.is_zero()) {
      UniPoly g = gcd(a * b, b);
      CHECK((b.primitive()).divrem(g).second.is_zero());
    }
  }
}

TEST_CASE("root isolation matches the Sturm oracle") {
  VarTable tab;
  VarId xv = tab.intern("x");

  UniPoly x2m2({Rational(-2), Rational(0), Rational(1)});
  auto r = isolate_roots(x2m2);
  REQUIRE(r.size() == 2);
  // After refinement the intervals land in (-2,-1) and (1,2) around the
  // two square roots.
  refine_below(x2m2, r[0], Rational(1, 4));
  refine_below(x2m2, r[1], Rational(1, 4));
  CHECK(r[0].lo >= Rational(-2));
  CHECK(r[0].hi <= Rational(-1));
  CHECK(r[1].lo >= Rational(1));
  CHECK(r[1].hi <= Rational(2));

  CHECK(isolate_roots(UniPoly({Rational(1), Rational(0), Rational(1)})).empty());

  auto cubic = isolate_roots(UniPoly({Rational(0), Rational(-1), Rational(0), Rational(1)}));
  REQUIRE(cubic.size() == 3);
  // Roots -1, 0, 1 in order.
  CHECK(cubic[0].lo <= Rational(-1));
  CHECK(cubic[0].hi >= Rational(-1));
  CHECK(cubic[1].is_point());
  CHECK(cubic[1].lo == Rational(0));
  CHECK(cubic[2].lo <= Rational(1));
  CHECK(cubic[2].hi >= Rational(1));

  CHECK_THROWS_AS(isolate_roots(UniPoly()), std::invalid_argument);

  Rng rng(53);
  for (int iter = 0; iter < 250; ++iter) {
    std::vector<Rational> cs;
    int deg = 1 + static_cast<int>(rng.below(6));
    for (int i = 0; i <= deg; ++i) cs.push_back(testutil::random_rational(rng, 8));
    UniPoly p(cs);
    if (p.degree() < 1) continue;

    auto ivs = isolate_roots(p);
    CHECK(static_cast<int>(ivs.size()) == count_real_roots(p));

    // Disjoint, sorted, and each refinement keeps its root.
    UniPoly sf = p.squarefree_part();
    for (std::size_t i = 0; i < ivs.size(); ++i) {
      if (i > 0) CHECK(ivs[i - 1].hi <= ivs[i].lo);
      Interval iv = ivs[i];
      if (!iv.is_point()) {
        CHECK(sf.sign_at(iv.lo) * sf.sign_at(iv.hi) < 0);
        refine_below(sf, iv, Rational(1, 1000));
        CHECK(iv.lo >= ivs[i].lo);
        CHECK(iv.hi <= ivs[i].hi);
        if (!iv.is_point()) CHECK(sf.sign_at(iv.lo) * sf.sign_at(iv.hi) < 0);
      } else {
        CHECK(sf.sign_at(iv.lo) == 0);
      }
    }
  }
}
