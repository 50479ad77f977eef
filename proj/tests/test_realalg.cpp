#include "doctest.h"

#include "mubqe/realalg.hpp"

#include "test_util.hpp"

using namespace mubqe;

namespace {

RealAlgebraic sqrt_of(long n) {
  UniPoly p({Rational(-n), Rational(0), Rational(1)});
  auto roots = real_roots(p);
  REQUIRE(roots.size() == 2);
  return roots[1];
}

}  // namespace

TEST_CASE("real roots and ordering") {
  auto roots = real_roots(UniPoly({Rational(-2), Rational(0), Rational(1)}));
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].sign() == -1);
  CHECK(roots[1].sign() == +1);
  CHECK(roots[0] < roots[1]);
  CHECK(roots[0] == -roots[1]);

  RealAlgebraic s2 = sqrt_of(2), s3 = sqrt_of(3);
  CHECK(s2 < s3);
  CHECK(RealAlgebraic::from_rational(Rational(1)) < s2);
  CHECK(s3 < RealAlgebraic::from_rational(Rational(2)));
  CHECK(s2 != s3);
  CHECK(s2 == s2);

  // Rational roots compare equal to their rational representations even
  // when they sit in a non-point isolating interval.
  auto r = real_roots(UniPoly({Rational(-1), Rational(0), Rational(1)}));
  REQUIRE(r.size() == 2);
  CHECK(r[0] == RealAlgebraic::from_rational(Rational(-1)));
  CHECK(r[1] == RealAlgebraic::from_rational(Rational(1)));
}

TEST_CASE("from_root validates its interval") {
  UniPoly x2m2({Rational(-2), Rational(0), Rational(1)});
  CHECK_THROWS_AS(RealAlgebraic::from_root(x2m2, {Rational(-3), Rational(3)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(RealAlgebraic::from_root(x2m2, {Rational(5), Rational(7)}),
                  std::invalid_argument);
  RealAlgebraic s2 = RealAlgebraic::from_root(x2m2, {Rational(1), Rational(2)});
  CHECK(s2.sign() == +1);
  // Squarefree normalization happens on the untrusted path.
  RealAlgebraic again = RealAlgebraic::from_root(x2m2 * x2m2, {Rational(1), Rational(2)});
  CHECK(again == s2);
}

TEST_CASE("algebraic arithmetic via resultants") {
  RealAlgebraic s2 = sqrt_of(2), s3 = sqrt_of(3), s6 = sqrt_of(6);

  CHECK(s2.plus(-s2) == RealAlgebraic());
  CHECK(s2.times(s2) == RealAlgebraic::from_rational(Rational(2)));
  CHECK(s2.times(s3) == s6);

  RealAlgebraic sum = s2.plus(s3);
  CHECK(sum.sign() == +1);
  // (sqrt3 + sqrt2)(sqrt3 - sqrt2) = 1.
  CHECK(sum.times(s3.plus(-s2)) == RealAlgebraic::from_rational(Rational(1)));
  // (sqrt2 + sqrt3)^2 = 5 + 2*sqrt6.
  CHECK(sum.times(sum) == s6.times_rational(Rational(2)).plus_rational(Rational(5)));

  // Golden ratio: x^2 = x + 1.
  auto phis = real_roots(UniPoly({Rational(-1), Rational(-1), Rational(1)}));
  REQUIRE(phis.size() == 2);
  RealAlgebraic phi = phis[1];
  CHECK(phi.times(phi) == phi.plus_rational(Rational(1)));

  CHECK(s2.times_rational(Rational(0)) == RealAlgebraic());
  CHECK(s2.plus_rational(Rational(1, 2)).plus_rational(Rational(-1, 2)) == s2);
  CHECK(s2.times_rational(Rational(-3)).sign() == -1);
}

TEST_CASE("alg_sign on univariate points") {
  RealAlgebraic s2 = sqrt_of(2);
  VarTable tab;
  VarId x = tab.intern("x");
  CHECK(alg_sign(Poly::var(x, 2) - Poly(Rational(2)), {s2}) == 0);
  CHECK(alg_sign(Poly::var(x), {s2}) == +1);
  CHECK(alg_sign(Poly::var(x, 2) - Poly(Rational(3)), {s2}) == -1);

  // Invariance under refinement of the isolating interval.
  RealAlgebraic refined = s2;
  for (int i = 0; i < 12; ++i) refined.refine();
  CHECK(alg_sign(Poly::var(x, 2) - Poly(Rational(2)), {refined}) == 0);
  CHECK(alg_sign(Poly::var(x, 2) - Poly(Rational(3)), {refined}) == -1);
}

TEST_CASE("alg_sign on multivariate points") {
  RealAlgebraic s2 = sqrt_of(2), s3 = sqrt_of(3), s6 = sqrt_of(6);
  VarTable tab;
  VarId x = tab.intern("x"), y = tab.intern("y"), z = tab.intern("z");

  Poly xy_minus_z = Poly::var(x) * Poly::var(y) - Poly::var(z);
  CHECK(alg_sign(xy_minus_z, {s2, s3, s6}, {x, y, z}) == 0);
  CHECK(alg_sign(xy_minus_z, {s2, s3, sqrt_of(7)}, {x, y, z}) == -1);
  CHECK(alg_sign(xy_minus_z, {s2, s3, RealAlgebraic::from_rational(Rational(2))},
                 {x, y, z}) == +1);

  // Identical representations collapse onto one coordinate.
  CHECK(alg_sign(Poly::var(x) * Poly::var(y) - Poly(Rational(2)), {s2, s2}, {x, y}) == 0);

  // Same defining polynomial, different roots: x + y at (sqrt2, -sqrt2).
  CHECK(alg_sign(Poly::var(x) + Poly::var(y), {s2, -s2}, {x, y}) == 0);
  CHECK(alg_sign(Poly::var(x) + Poly::var(y), {s2, -s3}, {x, y}) == -1);

  // All-rational points evaluate directly.
  CHECK(alg_sign(xy_minus_z,
                 {RealAlgebraic::from_rational(Rational(1, 2)),
                  RealAlgebraic::from_rational(Rational(4)),
                  RealAlgebraic::from_rational(Rational(2))},
                 {x, y, z}) == 0);
}

TEST_CASE("interval evaluation encloses the true value") {
  VarTable tab;
  VarId x = tab.intern("x"), y = tab.intern("y");
  testutil::Rng rng(59);
  std::vector<VarId> vars{x, y};
  for (int iter = 0; iter < 200; ++iter) {
    Poly p = testutil::random_poly(rng, vars, 5, 3);
    Rational vx = testutil::random_rational(rng, 6), vy = testutil::random_rational(rng, 6);
    Rational w(1, 1 + static_cast<long>(rng.below(9)));
    std::map<std::uint32_t, Interval> box{{x.index, {vx - w, vx + w}}, {y.index, {vy - w, vy + w}}};
    Interval j = interval_eval(p, box);
    Rational v = p.eval({{x.index, vx}, {y.index, vy}});
    CHECK(j.lo <= v);
    CHECK(v <= j.hi);
  }
}

TEST_CASE("reduce_mod_defining preserves the value") {
  RealAlgebraic s2 = sqrt_of(2), s3 = sqrt_of(3);
  VarTable tab;
  VarId x = tab.intern("x"), y = tab.intern("y");
  testutil::Rng rng(61);
  std::vector<VarId> vars{x, y};
  for (int iter = 0; iter < 50; ++iter) {
    Poly p = testutil::random_poly(rng, vars, 4, 5);
    Poly red = reduce_mod_defining(p, {x, y}, {s2, s3});
    CHECK(red.degree_in(x) <= 1);
    CHECK(red.degree_in(y) <= 1);
    if (p.is_zero()) continue;
    Poly diff = p - red;
    if (diff.is_zero()) continue;
    CHECK(alg_sign(diff, {s2, s3}, {x, y}) == 0);
  }
}
