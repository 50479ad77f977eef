// Formula construction and folding, the text round trip, exact evaluation,
// prenex conversion, and the complex-to-real translation.
#include <doctest.h>

#include <set>

#include "mubqe/complexpoly.hpp"
#include "mubqe/formula.hpp"
#include "test_util.hpp"

using namespace mubqe;
using testutil::Rng;

namespace {

FormulaPtr random_formula(Rng& rng, const std::vector<VarId>& vars, int depth) {
  if (depth <= 0 || rng.below(3) == 0) {
    switch (rng.below(10)) {
      case 0: return f_true();
      case 1: return f_false();
      default:
        return f_atom(testutil::random_poly(rng, vars, 3, 2),
                      static_cast<Rel>(rng.below(6)));
    }
  }
  switch (rng.below(6)) {
    case 0: return f_not(random_formula(rng, vars, depth - 1));
    case 1:
      return f_and(random_formula(rng, vars, depth - 1),
                   random_formula(rng, vars, depth - 1));
    case 2:
      return f_or(random_formula(rng, vars, depth - 1),
                  random_formula(rng, vars, depth - 1));
    case 3:
      return f_implies(random_formula(rng, vars, depth - 1),
                       random_formula(rng, vars, depth - 1));
    case 4:
      return f_exists(vars[rng.below(vars.size())], random_formula(rng, vars, depth - 1));
    default:
      return f_forall(vars[rng.below(vars.size())], random_formula(rng, vars, depth - 1));
  }
}

// Truth value when every quantifier ranges over the finite grid instead of
// the reals. Prenex conversion is an equivalence in every nonempty structure,
// so it must preserve this semantics too; that makes it an exhaustively
// checkable oracle.
bool grid_eval(const FormulaPtr& f, std::map<VarId, Rational>& env,
               const std::vector<Rational>& grid) {
  switch (f->kind()) {
    case FKind::True: return true;
    case FKind::False: return false;
    case FKind::Atom: {
      std::map<std::uint32_t, Rational> point;
      for (VarId v : f->lhs().vars()) point[v.index] = env.at(v);
      return rel_holds(f->rel(), sgn(f->lhs().eval(point)));
    }
    case FKind::Not: return !grid_eval(f->child(), env, grid);
    case FKind::And:
      return grid_eval(f->left(), env, grid) && grid_eval(f->right(), env, grid);
    case FKind::Or:
      return grid_eval(f->left(), env, grid) || grid_eval(f->right(), env, grid);
    case FKind::Implies:
      return !grid_eval(f->left(), env, grid) || grid_eval(f->right(), env, grid);
    case FKind::Exists:
    case FKind::Forall: {
      bool exists = f->kind() == FKind::Exists;
      auto it = env.find(f->var());
      bool had = it != env.end();
      Rational saved = had ? it->second : Rational(0);
      bool result = !exists;
      for (const Rational& g : grid) {
        env[f->var()] = g;
        bool b = grid_eval(f->child(), env, grid);
        if (b == exists) {
          result = exists;
          break;
        }
      }
      if (had) env[f->var()] = saved; else env.erase(f->var());
      return result;
    }
  }
  throw std::logic_error("bad FKind");
}

// Prenex shape: a quantifier prefix over a quantifier-free matrix, with bound
// variables pairwise distinct and disjoint from the free variables.
void check_prenex_shape(const FormulaPtr& f) {
  std::set<VarId> bound;
  FormulaPtr cur = f;
  while (cur->kind() == FKind::Exists || cur->kind() == FKind::Forall) {
    CHECK(!bound.count(cur->var()));
    bound.insert(cur->var());
    cur = cur->child();
  }
  CHECK(is_quantifier_free(cur));
  for (VarId v : free_vars(f)) CHECK(!bound.count(v));
}

RealAlgebraic sqrt2() {
  auto roots = real_roots(UniPoly({Rational(-2), Rational(0), Rational(1)}));
  return roots.back();
}

}  // namespace

TEST_CASE("relation helpers") {
  const Rel rels[] = {Rel::Eq, Rel::Ne, Rel::Lt, Rel::Le, Rel::Gt, Rel::Ge};
  for (Rel r : rels) {
    for (int s : {-1, 0, 1}) {
      CHECK(rel_holds(negate_rel(r), s) == !rel_holds(r, s));
      // mirroring the relation matches negating the sign
      CHECK(rel_holds(mirror_rel(r), -s) == rel_holds(r, s));
    }
    CHECK(negate_rel(negate_rel(r)) == r);
    CHECK(mirror_rel(mirror_rel(r)) == r);
  }
}

TEST_CASE("builders fold constants") {
  VarTable t;
  Poly x = Poly::var(t.intern("x"));
  FormulaPtr atom = f_atom(x - Poly(Rational(1)), Rel::Gt);

  CHECK(f_atom(Poly(Rational(1)), Rel::Gt)->kind() == FKind::True);
  CHECK(f_atom(Poly(Rational(0)), Rel::Eq)->kind() == FKind::True);
  CHECK(f_atom(Poly(Rational(0)), Rel::Lt)->kind() == FKind::False);
  CHECK(f_atom(x - x, Rel::Eq)->kind() == FKind::True);

  CHECK(f_not(f_true())->kind() == FKind::False);
  CHECK(equal(f_not(f_not(atom)), atom));

  CHECK(equal(f_and(f_true(), atom), atom));
  CHECK(f_and(f_false(), atom)->kind() == FKind::False);
  CHECK(equal(f_or(f_false(), atom), atom));
  CHECK(f_or(f_true(), atom)->kind() == FKind::True);
  CHECK(f_implies(f_false(), atom)->kind() == FKind::True);
  CHECK(equal(f_implies(f_true(), atom), atom));
  CHECK(equal(f_implies(atom, f_false()), f_not(atom)));

  VarId y = t.intern("y");
  CHECK(f_exists(y, f_true())->kind() == FKind::True);
  CHECK(equal(f_exists(y, atom), atom));  // y not mentioned
  CHECK(f_forall(y, f_false())->kind() == FKind::False);

  CHECK(f_and_all({})->kind() == FKind::True);
  CHECK(f_or_all({})->kind() == FKind::False);
  CHECK(equal(f_and_all({f_true(), atom, f_true()}), atom));
}

TEST_CASE("atom normalization") {
  VarTable t;
  Poly x = Poly::var(t.intern("x"));

  CHECK(equal(f_atom(x.scaled(Rational(2)) - Poly(Rational(4)), Rel::Le),
              f_atom(x - Poly(Rational(2)), Rel::Le)));
  // a negative-leading lhs is flipped and the relation mirrored
  CHECK(equal(f_atom(-x, Rel::Gt), f_atom(x, Rel::Lt)));
  CHECK(equal(f_atom(-x, Rel::Eq), f_atom(x, Rel::Eq)));

  FormulaPtr a = f_atom(x.scaled(Rational(1, 3)) + Poly(Rational(1, 6)), Rel::Eq);
  CHECK(a->lhs().to_string(t) == "2*x + 1");
  CHECK(sgn(a->lhs().terms().begin()->second) > 0);
}

TEST_CASE("parser accepts the published forms") {
  VarTable t;

  FormulaPtr f = parse_formula("(A y)(E x) x^2 = y", t);
  REQUIRE(f->kind() == FKind::Forall);
  CHECK(t.name_of(f->var()) == "y");
  REQUIRE(f->child()->kind() == FKind::Exists);
  CHECK(t.name_of(f->child()->var()) == "x");
  const FormulaPtr& matrix = f->child()->child();
  REQUIRE(matrix->kind() == FKind::Atom);
  CHECK(matrix->rel() == Rel::Eq);
  CHECK(matrix->lhs() ==
        Poly::var(t.id_of("x"), 2) - Poly::var(t.id_of("y")));

  FormulaPtr g = parse_formula("a*x^2 + b*x + c > 0", t);
  REQUIRE(g->kind() == FKind::Atom);
  std::set<std::string> names;
  for (VarId v : free_vars(g)) names.insert(t.name_of(v));
  CHECK(names == std::set<std::string>{"a", "b", "c", "x"});

  CHECK(parse_formula("true", t)->kind() == FKind::True);
  CHECK(parse_formula("false", t)->kind() == FKind::False);

  // whitespace is insignificant, including inside rationals and powers
  CHECK(equal(parse_formula("1 / 2 * x = 0", t), parse_formula("x=0", t)));
  CHECK(equal(parse_formula("x ^ 2 = y", t), parse_formula("x^2=y", t)));
  // unary minus
  CHECK(equal(parse_formula("-x + y > 0", t), parse_formula("y - x > 0", t)));
  CHECK(equal(parse_formula("-2*x <= 1", t), parse_formula("2*x >= -1", t)));
  // E and A are ordinary identifiers outside the quantifier position
  FormulaPtr h = parse_formula("E + A > 0", t);
  REQUIRE(h->kind() == FKind::Atom);
  CHECK(free_vars(h).size() == 2);
}

TEST_CASE("parser rejects malformed input with positions") {
  VarTable t;
  CHECK_THROWS_AS(parse_formula("x >", t), ParseError);
  CHECK_THROWS_AS(parse_formula("x^y = 0", t), ParseError);
  CHECK_THROWS_AS(parse_formula("(x > 0", t), ParseError);
  CHECK_THROWS_AS(parse_formula("x = 1/0", t), ParseError);
  CHECK_THROWS_AS(parse_formula("", t), ParseError);
  CHECK_THROWS_AS(parse_formula("x ? 0", t), ParseError);

  try {
    parse_formula("x +\n* 2 = 0", t);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.col == 1);
  }

  VarTable closed;
  closed.intern("x");
  CHECK_NOTHROW(parse_formula("x > 0", closed, false));
  try {
    parse_formula("x + q > 0", closed, false);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("unknown identifier 'q'") != std::string::npos);
  }
}

TEST_CASE("printer output is canonical") {
  VarTable t;
  CHECK(print_formula(f_false(), t) == "false");
  CHECK(print_formula(f_true(), t) == "true");

  FormulaPtr f = parse_formula("(A y)(E x) x^2 = y", t);
  CHECK(print_formula(f, t) == "(A y) (E x) x^2 - y = 0");
  CHECK(equal(parse_formula(print_formula(f, t), t), f));

  Poly x = Poly::var(t.id_of("x")), y = Poly::var(t.id_of("y"));
  FormulaPtr a = f_atom(x, Rel::Gt), b = f_atom(y, Rel::Gt);
  CHECK(print_formula(f_not(f_and(a, b)), t) == "~(x > 0 /\\ y > 0)");
  CHECK(print_formula(f_implies(f_or(a, b), a), t) == "x > 0 \\/ y > 0 -> x > 0");
  // a quantified subformula continuing into a connective needs parentheses
  FormulaPtr q = f_and(f_exists(t.id_of("x"), f_and(a, b)), b);
  CHECK(print_formula(q, t) == "((E x) x > 0 /\\ y > 0) /\\ y > 0");
  CHECK(equal(parse_formula(print_formula(q, t), t), q));
}

TEST_CASE("print-parse round trip on random formulas") {
  VarTable t;
  std::vector<VarId> vars = {t.intern("x"), t.intern("y"), t.intern("z")};
  Rng rng(0x10a1c001ULL);
  for (int i = 0; i < 10000; ++i) {
    FormulaPtr f = random_formula(rng, vars, 3);
    std::string s = print_formula(f, t);
    FormulaPtr g = parse_formula(s, t);
    bool ok = equal(f, g);
    CHECK(ok);
    if (!ok) {
      MESSAGE("iteration ", i, ": ", s);
      break;
    }
    CHECK(print_formula(g, t) == s);
  }
}

TEST_CASE("free variables and substitution") {
  VarTable t;
  VarId x = t.intern("x"), y = t.intern("y"), z = t.intern("z");
  FormulaPtr f = parse_formula("(E x) x*y = 1", t);

  CHECK(free_vars(f) == std::set<VarId>{y});
  CHECK(!is_quantifier_free(f));
  CHECK(is_quantifier_free(f->child()));

  FormulaPtr g = subst(f, y, Rational(2));
  CHECK(equal(g, parse_formula("(E x) 2*x = 1", t)));
  CHECK(free_vars(g).empty());
  // substituting for the bound variable is a no-op
  CHECK(equal(subst(f, x, Rational(3)), f));

  FormulaPtr h = subst(f, y, Poly::var(z, 2));
  CHECK(equal(h, parse_formula("(E x) x*z^2 = 1", t)));
  CHECK_THROWS_AS(subst(f, y, Poly::var(x)), std::logic_error);
}

TEST_CASE("evaluation at exact points") {
  VarTable t;
  VarId a = t.intern("a"), b = t.intern("b"), c = t.intern("c"), x = t.intern("x");
  auto rat = [](long n) { return RealAlgebraic::from_rational(Rational(n)); };

  FormulaPtr quad = parse_formula("a*x^2 + b*x + c > 0", t);
  CHECK(evaluate(quad, {{a, rat(1)}, {b, rat(0)}, {c, rat(1)}, {x, rat(0)}}));
  CHECK(!evaluate(quad, {{a, rat(1)}, {b, rat(0)}, {c, rat(-1)}, {x, rat(0)}}));

  FormulaPtr disc = parse_formula("4*a*c > b^2", t);
  CHECK(evaluate(disc, {{a, rat(1)}, {b, rat(1)}, {c, rat(1)}}));

  VarId y = t.intern("y");
  FormulaPtr sq = parse_formula("x^2 = y", t);
  CHECK(evaluate(sq, {{x, sqrt2()}, {y, rat(2)}}));
  CHECK(!evaluate(sq, {{x, sqrt2()}, {y, rat(3)}}));

  FormulaPtr both = parse_formula("x > 0 /\\ y > 0", t);
  CHECK(!evaluate(both, {{x, rat(1)}, {y, rat(-1)}}));
  CHECK(evaluate(f_not(both), {{x, rat(1)}, {y, rat(-1)}}));
  CHECK(evaluate(parse_formula("x > 0 -> y > 0", t), {{x, rat(-1)}, {y, rat(-1)}}));

  CHECK_THROWS_AS(evaluate(sq, {{x, sqrt2()}}), std::invalid_argument);
  CHECK_THROWS_AS(evaluate(parse_formula("(E x) x = y", t), {{y, rat(1)}}),
                  std::logic_error);
}

TEST_CASE("negation normal form") {
  VarTable t;
  FormulaPtr a = parse_formula("x > 0", t), b = parse_formula("y > 0", t);

  CHECK(equal(to_nnf(f_not(f_and(a, b))),
              f_or(parse_formula("x <= 0", t), parse_formula("y <= 0", t))));
  CHECK(equal(to_nnf(f_implies(a, b)), f_or(parse_formula("x <= 0", t), b)));
  CHECK(equal(to_nnf(f_not(parse_formula("(A y)(E x) x^2 = y", t))),
              parse_formula("(E y)(A x) x^2 != y", t)));
}

TEST_CASE("prenex conversion") {
  VarTable t;
  FormulaPtr qf = parse_formula("x > 0 /\\ y = 1", t);
  CHECK(equal(to_prenex(qf, t), qf));

  // both conjuncts bind x; the second copy is renamed apart
  FormulaPtr f = parse_formula("((E x) x > 1) /\\ ((E x) x < 0)", t);
  FormulaPtr p = to_prenex(f, t);
  REQUIRE(p->kind() == FKind::Exists);
  REQUIRE(p->child()->kind() == FKind::Exists);
  CHECK(p->var() != p->child()->var());
  CHECK(p->child()->child()->kind() == FKind::And);
  check_prenex_shape(p);

  FormulaPtr neg = to_prenex(f_not(parse_formula("(A y)(E x) x^2 = y", t)), t);
  CHECK(equal(neg, parse_formula("(E y)(A x) x^2 != y", t)));
  check_prenex_shape(neg);
}

TEST_CASE("prenex conversion preserves finite-structure truth") {
  VarTable t;
  std::vector<VarId> vars = {t.intern("x"), t.intern("y"), t.intern("z")};
  const std::vector<Rational> grid = {Rational(-2), Rational(-1, 2), Rational(0),
                                      Rational(1), Rational(3)};
  Rng rng(0x94e9e801ULL);
  for (int i = 0; i < 300; ++i) {
    FormulaPtr f = random_formula(rng, vars, 3);
    std::map<VarId, Rational> env;
    for (std::size_t j = 0; j < vars.size(); ++j)
      env[vars[j]] = grid[rng.below(grid.size())];

    FormulaPtr p = to_prenex(f, t);
    check_prenex_shape(p);
    std::map<VarId, Rational> env2 = env;
    bool lhs = grid_eval(f, env, grid);
    bool rhs = grid_eval(p, env2, grid);
    CHECK(lhs == rhs);
    if (lhs != rhs) {
      MESSAGE("iteration ", i, ": ", print_formula(f, t), "  vs  ",
              print_formula(p, t));
      break;
    }
  }
}

TEST_CASE("formula ordering is a total order usable for dedupe") {
  VarTable t;
  std::vector<VarId> vars = {t.intern("x"), t.intern("y")};
  Rng rng(0xdedb0e01ULL);
  std::vector<FormulaPtr> fs;
  for (int i = 0; i < 200; ++i) fs.push_back(random_formula(rng, vars, 2));

  auto less = [](const FormulaPtr& a, const FormulaPtr& b) { return compare(a, b) < 0; };
  std::set<FormulaPtr, decltype(less)> dedup(less);
  for (const auto& f : fs) dedup.insert(f);

  std::size_t naive = 0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    bool seen = false;
    for (std::size_t j = 0; j < i; ++j)
      if (equal(fs[i], fs[j])) { seen = true; break; }
    if (!seen) ++naive;
  }
  CHECK(dedup.size() == naive);

  for (std::size_t i = 0; i < 50; ++i) {
    const FormulaPtr &a = fs[i], &b = fs[i + 50], &c = fs[i + 100];
    CHECK(compare(a, b) == -compare(b, a));
    if (compare(a, b) <= 0 && compare(b, c) <= 0) CHECK(compare(a, c) <= 0);
  }
}

TEST_CASE("complex expressions translate to paired real variables") {
  VarTable t;
  ComplexVarPair z = intern_complex(t, "z");
  CHECK(t.name_of(z.re) == "z0");
  CHECK(t.name_of(z.im) == "z1");

  ComplexExpr ze = ComplexExpr::var(z);
  CHECK(equal(modulus_cmp(ze, Rel::Gt, Rational(3)),
              parse_formula("z0^2 + z1^2 > 9", t)));
  CHECK(modulus_cmp(ze, Rel::Lt, Rational(-1))->kind() == FKind::False);
  CHECK(modulus_cmp(ze, Rel::Ge, Rational(-1))->kind() == FKind::True);

  ComplexExpr prod = ze.conj() * ze;
  CHECK(prod.is_real());
  CHECK(prod.re() == ze.mod_squared());
  CHECK(prod.re() == parse_term("z0^2 + z1^2", t));

  ComplexVarPair w = intern_complex(t, "w");
  ComplexExpr we = ComplexExpr::var(w);
  FormulaPtr unit = complex_eq(ze * we, ComplexExpr::constant(Rational(1)));
  CHECK(equal(unit, parse_formula("z0*w0 - z1*w1 = 1 /\\ z0*w1 + z1*w0 = 0", t)));
}

TEST_CASE("inner product expands with the conjugate on the second argument") {
  VarTable t;
  std::vector<ComplexExpr> v, w;
  for (int i = 1; i <= 2; ++i) {
    v.push_back(ComplexExpr::var(intern_complex(t, "v" + std::to_string(i))));
    w.push_back(ComplexExpr::var(intern_complex(t, "w" + std::to_string(i))));
  }
  ComplexExpr ip = inner_product(v, w);
  CHECK(ip.re() == parse_term("v10*w10 + v11*w11 + v20*w20 + v21*w21", t));
  CHECK(ip.im() == parse_term("v11*w10 - v10*w11 + v21*w20 - v20*w21", t));
  CHECK(ip.mod_squared() == ip.re() * ip.re() + ip.im() * ip.im());

  CHECK_THROWS_AS(inner_product(v, {w[0]}), std::invalid_argument);
}

TEST_CASE("complex variables double the real variable count") {
  VarTable t;
  std::vector<ComplexExpr> zs;
  for (int i = 0; i < 5; ++i)
    zs.push_back(ComplexExpr::var(intern_complex(t, "u" + std::to_string(i))));
  CHECK(t.size() == 10);

  Poly norm;
  for (const auto& z : zs) norm += z.mod_squared();
  CHECK(norm.vars().size() == 10);
}
