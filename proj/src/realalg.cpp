#include "mubqe/realalg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "mubqe/deadline.hpp"
#include "mubqe/resultant.hpp"

namespace mubqe {

namespace {

UniPoly linear_for(const Rational& r) {
  return UniPoly({-r, Rational(1)});
}

bool intervals_overlap(const Interval& a, const Interval& b) {
  return std::max(a.lo, b.lo) <= std::min(a.hi, b.hi);
}

// Roots of the chain's polynomial in the closed interval [a, b].
int count_roots_closed(const UniPoly& p, const std::vector<UniPoly>& chain,
                       const Rational& a, const Rational& b) {
  int at_left = p.sign_at(a) == 0 ? 1 : 0;
  if (a == b) return at_left;
  return count_roots_in(chain, a, b) + at_left;
}

}  // namespace

RealAlgebraic::RealAlgebraic()
    : defining_(UniPoly::x()), iv_{Rational(0), Rational(0)} {}

RealAlgebraic RealAlgebraic::from_rational(const Rational& r) {
  RealAlgebraic a;
  a.defining_ = linear_for(r);
  a.iv_ = {r, r};
  return a;
}

RealAlgebraic RealAlgebraic::from_root(UniPoly defining, Interval iv, bool trusted) {
  if (defining.is_zero()) throw std::invalid_argument("defining polynomial is zero");
  if (iv.lo > iv.hi) throw std::invalid_argument("empty isolating interval");
  if (!trusted) {
    defining = defining.squarefree_part();
    auto chain = sturm_chain(defining);
    if (count_roots_closed(defining, chain, iv.lo, iv.hi) != 1)
      throw std::invalid_argument("interval does not isolate exactly one root");
  }
  if (iv.is_point()) return from_rational(iv.lo);
  // Endpoint roots collapse to rationals, keeping the invariant that open
  // isolating intervals have non-root endpoints.
  if (defining.sign_at(iv.lo) == 0) return from_rational(iv.lo);
  if (defining.sign_at(iv.hi) == 0) return from_rational(iv.hi);
  if (defining.degree() == 1) return from_rational(-defining.coeff(0) / defining.coeff(1));
  RealAlgebraic a;
  a.defining_ = defining.primitive();
  a.iv_ = std::move(iv);
  return a;
}

const Rational& RealAlgebraic::rational_value() const {
  if (!is_rational()) throw std::logic_error("rational_value of irrational number");
  return iv_.lo;
}

void RealAlgebraic::refine() {
  refine_step(defining_, iv_);
  if (iv_.is_point()) *this = from_rational(iv_.lo);
}

void RealAlgebraic::refine_below(const Rational& eps) {
  while (!iv_.is_point() && iv_.width() > eps) {
    deadline_tick();
    refine();
  }
}

int RealAlgebraic::sign() const {
  if (is_rational()) return sign_of(rational_value());
  RealAlgebraic t = *this;
  // Zero is rational, so an irrational number leaves an all-positive or
  // all-negative interval after finitely many steps.
  while (t.iv_.lo < 0 && t.iv_.hi > 0) {
    deadline_tick();
    t.refine();
  }
  if (t.is_rational()) return sign_of(t.rational_value());
  return t.iv_.lo >= 0 ? +1 : -1;
}

bool RealAlgebraic::same_representation(const RealAlgebraic& o) const {
  return iv_.lo == o.iv_.lo && iv_.hi == o.iv_.hi && defining_ == o.defining_;
}

int RealAlgebraic::compare(const RealAlgebraic& o) const {
  if (is_rational() && o.is_rational()) return cmp(rational_value(), o.rational_value());

  // Exact equality test first, so the refinement loop below only runs on
  // numbers that genuinely separate.
  bool equal = false;
  if (is_rational()) {
    const Rational& r = rational_value();
    equal = o.defining_.sign_at(r) == 0 && o.iv_.lo <= r && r <= o.iv_.hi;
  } else if (o.is_rational()) {
    const Rational& r = o.rational_value();
    equal = defining_.sign_at(r) == 0 && iv_.lo <= r && r <= iv_.hi;
  } else if (intervals_overlap(iv_, o.iv_)) {
    UniPoly g = gcd(defining_, o.defining_);
    if (g.degree() > 0) {
      Rational lo = std::max(iv_.lo, o.iv_.lo);
      Rational hi = std::min(iv_.hi, o.iv_.hi);
      equal = count_roots_closed(g, sturm_chain(g), lo, hi) > 0;
    }
  }
  if (equal) return 0;

  RealAlgebraic a = *this, b = o;
  while (intervals_overlap(a.iv_, b.iv_)) {
    deadline_tick();
    a.refine();
    b.refine();
  }
  return a.iv_.hi < b.iv_.lo ? -1 : +1;
}

RealAlgebraic RealAlgebraic::operator-() const {
  if (is_rational()) return from_rational(-rational_value());
  RealAlgebraic r;
  r.defining_ = defining_.scaled_arg(Rational(-1)).primitive();
  r.iv_ = {-iv_.hi, -iv_.lo};
  return r;
}

RealAlgebraic RealAlgebraic::plus_rational(const Rational& q) const {
  if (is_rational()) return from_rational(rational_value() + q);
  RealAlgebraic r;
  r.defining_ = defining_.shifted(-q).primitive();
  r.iv_ = {iv_.lo + q, iv_.hi + q};
  return r;
}

RealAlgebraic RealAlgebraic::times_rational(const Rational& q) const {
  if (q == 0) return RealAlgebraic();
  if (is_rational()) return from_rational(rational_value() * q);
  RealAlgebraic r;
  r.defining_ = defining_.scaled_arg(Rational(1) / q).primitive();
  if (q > 0) r.iv_ = {iv_.lo * q, iv_.hi * q};
  else r.iv_ = {iv_.hi * q, iv_.lo * q};
  return r;
}

namespace {

// Locates the combined value v (known to be a root of candidate polynomial
// cand) by shrinking the callers' enclosure until exactly one isolated root
// interval remains in play.
RealAlgebraic locate_root(const UniPoly& cand,
                          RealAlgebraic a, RealAlgebraic b,
                          Interval (*enclose)(const Interval&, const Interval&)) {
  UniPoly sf = cand.squarefree_part();
  std::vector<Interval> roots = isolate_roots(sf);
  while (true) {
    deadline_tick();
    Interval window = enclose(a.interval(), b.interval());
    std::vector<const Interval*> live;
    for (auto& r : roots)
      if (intervals_overlap(r, window)) live.push_back(&r);
    if (live.size() == 1) {
      // The value lies in the window and is a root, so it is the unique
      // root isolated by *live[0].
      return RealAlgebraic::from_root(sf, *live[0], /*trusted=*/true);
    }
    a.refine();
    b.refine();
  }
}

Interval enclose_sum(const Interval& x, const Interval& y) {
  return {x.lo + y.lo, x.hi + y.hi};
}

Interval enclose_product(const Interval& x, const Interval& y) {
  Rational p1 = x.lo * y.lo, p2 = x.lo * y.hi, p3 = x.hi * y.lo, p4 = x.hi * y.hi;
  return {std::min(std::min(p1, p2), std::min(p3, p4)),
          std::max(std::max(p1, p2), std::max(p3, p4))};
}

}  // namespace

RealAlgebraic RealAlgebraic::plus(const RealAlgebraic& o) const {
  if (is_rational()) return o.plus_rational(rational_value());
  if (o.is_rational()) return plus_rational(o.rational_value());
  // Res_y(f(x - y), g(y)) vanishes at x = alpha + beta.
  VarId X{0}, Y{1};
  Poly fxy = defining_.to_poly(X).subst(X, Poly::var(X) - Poly::var(Y));
  Poly cand = resultant_any(fxy, o.defining_.to_poly(Y), Y);
  return locate_root(UniPoly::from_poly(cand, X), *this, o, enclose_sum);
}

RealAlgebraic RealAlgebraic::times(const RealAlgebraic& o) const {
  if (is_rational()) return o.times_rational(rational_value());
  if (o.is_rational()) return times_rational(o.rational_value());
  // Res_y(y^m f(x/y), g(y)) vanishes at x = alpha * beta. A root of f at 0
  // would drop the y-degree, so strip it first (alpha is irrational, hence
  // nonzero, and the stripped polynomial still defines it).
  UniPoly f = defining_;
  if (f.coeff(0) == 0) {
    std::vector<Rational> cs(f.coeffs().begin() + 1, f.coeffs().end());
    f = UniPoly(std::move(cs));
  }
  VarId X{0}, Y{1};
  int m = f.degree();
  Poly hom;
  for (int i = 0; i <= m; ++i) {
    if (f.coeff(i) == 0) continue;
    hom += Poly::var(X, static_cast<unsigned>(i)).scaled(f.coeff(i)) *
           Poly::var(Y, static_cast<unsigned>(m - i));
  }
  Poly cand = resultant_any(hom, o.defining_.to_poly(Y), Y);
  return locate_root(UniPoly::from_poly(cand, X), *this, o, enclose_product);
}

std::string RealAlgebraic::to_string() const {
  if (is_rational()) return rational_to_string(rational_value());
  std::ostringstream os;
  os << "root(" << defining_.to_string() << ", [" << rational_to_string(iv_.lo)
     << ", " << rational_to_string(iv_.hi) << "])";
  return os.str();
}

std::vector<RealAlgebraic> real_roots(const UniPoly& p) {
  UniPoly sf = p.squarefree_part();
  std::vector<RealAlgebraic> out;
  for (auto& iv : isolate_roots(sf)) out.push_back(RealAlgebraic::from_root(sf, iv, /*trusted=*/true));
  return out;
}

namespace {

Interval iv_add(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }

Interval iv_mul(const Interval& a, const Interval& b) {
  Rational p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return {std::min(std::min(p1, p2), std::min(p3, p4)),
          std::max(std::max(p1, p2), std::max(p3, p4))};
}

Interval iv_pow(const Interval& a, unsigned e) {
  if (e == 0) return {Rational(1), Rational(1)};
  Interval r = a;
  for (unsigned i = 1; i < e; ++i) r = iv_mul(r, a);
  return r;
}

}  // namespace

Interval interval_eval(const Poly& p, const std::map<std::uint32_t, Interval>& box) {
  Interval acc{Rational(0), Rational(0)};
  for (auto& [m, c] : p.terms()) {
    Interval t{c, c};
    for (auto& [idx, e] : m.exps) {
      auto it = box.find(idx);
      if (it == box.end()) throw std::invalid_argument("interval_eval: unbound variable");
      t = iv_mul(t, iv_pow(it->second, e));
    }
    acc = iv_add(acc, t);
  }
  return acc;
}

Poly reduce_mod_defining(Poly p, const std::vector<VarId>& vars,
                         const std::vector<RealAlgebraic>& point) {
  if (vars.size() != point.size())
    throw std::invalid_argument("reduce_mod_defining: size mismatch");
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (point[i].is_rational()) {
      p = p.subst(vars[i], point[i].rational_value());
      continue;
    }
    const UniPoly& f = point[i].defining();
    unsigned m = static_cast<unsigned>(f.degree());
    if (p.degree_in(vars[i]) < m) continue;
    Poly fm = f.monic().to_poly(vars[i]);
    while (true) {
      deadline_tick();
      unsigned d = p.degree_in(vars[i]);
      if (d < m) break;
      p -= p.coeff_of(vars[i], d) * Poly::var(vars[i], d - m) * fm;
    }
  }
  return p;
}

namespace {

// T(z) = iterated resultant of (z - p) against every coordinate's defining
// polynomial; the value p(point) is a real root of T, and T is not zero.
UniPoly annihilating_poly(const Poly& p, const std::vector<VarId>& vars,
                          const std::vector<RealAlgebraic>& point, VarId z) {
  Poly q = Poly::var(z) - p;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (!q.mentions(vars[i])) continue;
    q = resultant_any(q, point[i].defining().to_poly(vars[i]), vars[i]);
  }
  return UniPoly::from_poly(q, z);
}

}  // namespace

int alg_sign(const Poly& p0, const std::vector<RealAlgebraic>& point0,
             const std::vector<VarId>& vars0) {
  if (vars0.size() != point0.size()) throw std::invalid_argument("alg_sign: size mismatch");

  // Collapse coordinates with identical representations onto one variable
  // and substitute rational coordinates outright; both shrink the iterated
  // resultant dramatically on the repetitive points CAD produces.
  Poly p = p0;
  std::vector<VarId> vars;
  std::vector<RealAlgebraic> point;
  for (std::size_t i = 0; i < vars0.size(); ++i) {
    if (!p.mentions(vars0[i])) continue;
    if (point0[i].is_rational()) {
      p = p.subst(vars0[i], point0[i].rational_value());
      continue;
    }
    bool merged = false;
    for (std::size_t j = 0; j < vars.size(); ++j) {
      if (point[j].same_representation(point0[i])) {
        p = p.subst(vars0[i], Poly::var(vars[j]));
        merged = true;
        break;
      }
    }
    if (!merged) {
      vars.push_back(vars0[i]);
      point.push_back(point0[i]);
    }
  }
  if (p.is_constant()) return sign_of(p.constant_value());

  p = reduce_mod_defining(p, vars, point);
  if (p.is_zero()) return 0;
  if (p.is_constant()) return sign_of(p.constant_value());

  // Refinement ladder: narrow the box until the sign shows, falling back to
  // the exact zero test when 0 stays inside the enclosure.
  std::vector<RealAlgebraic> local = point;
  bool analyzed = false;
  bool zero_impossible = false;
  Rational eps;
  for (int round = 0;; ++round) {
    deadline_tick();
    std::map<std::uint32_t, Interval> box;
    for (std::size_t i = 0; i < vars.size(); ++i) box[vars[i].index] = local[i].interval();
    Interval j = interval_eval(p, box);
    if (j.lo > 0) return +1;
    if (j.hi < 0) return -1;
    if (j.lo == 0 && j.hi == 0) return 0;

    if (!analyzed && round >= 2) {
      analyzed = true;
      std::uint32_t zi = 0;
      for (auto v : p.vars()) zi = std::max(zi, v.index + 1);
      for (auto v : vars) zi = std::max(zi, v.index + 1);
      UniPoly t = annihilating_poly(p, vars, point, VarId{zi});
      std::size_t s = 0;
      while (s < t.coeffs().size() && t.coeffs()[s] == 0) ++s;
      if (s == 0) {
        zero_impossible = true;  // T(0) != 0, so the value cannot be 0
      } else {
        std::vector<Rational> ucs(t.coeffs().begin() + s, t.coeffs().end());
        UniPoly u(std::move(ucs));
        if (u.degree() == 0) return 0;  // value is a root of z^s alone
        UniPoly usf = u.squarefree_part();
        auto roots = isolate_roots(usf);
        if (roots.empty()) return 0;  // no nonzero real candidates remain
        bool have = false;
        for (auto& r : roots) {
          Interval iv = r;
          while (!iv.is_point() && iv.lo <= 0 && 0 <= iv.hi) {
            deadline_tick();
            refine_step(usf, iv);
          }
          // 0 is not a root of u, so the interval ends up on one side.
          Rational dist = iv.lo > 0 ? iv.lo : -iv.hi;
          if (!have || dist < eps) { eps = dist; have = true; }
        }
      }
    }
    if (analyzed && !zero_impossible && j.hi - j.lo < eps) return 0;

    for (auto& c : local) c.refine();
  }
}

int alg_sign(const Poly& p, const std::vector<RealAlgebraic>& point) {
  auto vs = p.vars();
  std::vector<VarId> vars(vs.begin(), vs.end());
  if (vars.size() != point.size()) throw std::invalid_argument("alg_sign: size mismatch");
  return alg_sign(p, point, vars);
}

}  // namespace mubqe
