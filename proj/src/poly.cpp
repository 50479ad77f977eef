#include "mubqe/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "mubqe/deadline.hpp"

namespace mubqe {

namespace {

// mpq arithmetic assumes canonical operands, but mpq_class(num, den) does not
// canonicalize. Normalize every rational entering the term map.
Rational canon(Rational q) {
  q.canonicalize();
  return q;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  try {
    Rational q(text);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("bad rational literal: " + text);
  }
}

std::string rational_to_string(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

unsigned Monomial::total_degree() const {
  unsigned d = 0;
  for (auto& [v, e] : exps) d += e;
  return d;
}

unsigned Monomial::degree_of(VarId v) const {
  for (auto& [idx, e] : exps)
    if (idx == v.index) return e;
  return 0;
}

Monomial Monomial::times(const Monomial& other) const {
  Monomial r;
  r.exps.reserve(exps.size() + other.exps.size());
  auto a = exps.begin(), ae = exps.end();
  auto b = other.exps.begin(), be = other.exps.end();
  while (a != ae && b != be) {
    if (a->first < b->first) r.exps.push_back(*a++);
    else if (b->first < a->first) r.exps.push_back(*b++);
    else {
      r.exps.emplace_back(a->first, a->second + b->second);
      ++a; ++b;
    }
  }
  r.exps.insert(r.exps.end(), a, ae);
  r.exps.insert(r.exps.end(), b, be);
  return r;
}

std::pair<Monomial, unsigned> Monomial::without(VarId v) const {
  Monomial r;
  unsigned removed = 0;
  for (auto& [idx, e] : exps) {
    if (idx == v.index) removed = e;
    else r.exps.emplace_back(idx, e);
  }
  return {r, removed};
}

bool MonoGrlexGreater::operator()(const Monomial& a, const Monomial& b) const {
  unsigned da = a.total_degree(), db = b.total_degree();
  if (da != db) return da > db;
  // Lex with the lowest variable index most significant.
  auto ia = a.exps.begin(), ea = a.exps.end();
  auto ib = b.exps.begin(), eb = b.exps.end();
  while (ia != ea && ib != eb) {
    if (ia->first != ib->first) {
      // The side owning the smaller index has a positive exponent there.
      return ia->first < ib->first;
    }
    if (ia->second != ib->second) return ia->second > ib->second;
    ++ia; ++ib;
  }
  return ia != ea;
}

Poly::Poly(const Rational& c) {
  Rational q = canon(c);
  if (q != 0) terms_.emplace(Monomial{}, std::move(q));
}

Poly Poly::var(VarId v, unsigned exp) {
  Poly p;
  if (exp == 0) return Poly(Rational(1));
  Monomial m;
  m.exps.emplace_back(v.index, exp);
  p.terms_.emplace(std::move(m), Rational(1));
  return p;
}

Rational Poly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_constant()) throw std::logic_error("constant_value on non-constant poly");
  return terms_.begin()->second;
}

unsigned Poly::total_degree() const {
  return terms_.empty() ? 0 : terms_.begin()->first.total_degree();
}

unsigned Poly::degree_in(VarId v) const {
  unsigned d = 0;
  for (auto& [m, c] : terms_) d = std::max(d, m.degree_of(v));
  return d;
}

std::set<VarId> Poly::vars() const {
  std::set<VarId> s;
  for (auto& [m, c] : terms_)
    for (auto& [idx, e] : m.exps) s.insert(VarId{idx});
  return s;
}

bool Poly::mentions(VarId v) const {
  for (auto& [m, c] : terms_)
    if (m.degree_of(v) > 0) return true;
  return false;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
  Rational q = canon(c);
  if (q == 0) return;
  auto [it, inserted] = terms_.emplace(m, q);
  if (!inserted) {
    it->second += q;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly r;
  for (auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  for (auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  r += o;
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  r -= o;
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  for (auto& [ma, ca] : terms_) {
    deadline_tick();
    for (auto& [mb, cb] : o.terms_) r.add_term(ma.times(mb), ca * cb);
  }
  return r;
}

Poly Poly::scaled(const Rational& c) const {
  Poly r;
  Rational q = canon(c);
  if (q == 0) return r;
  for (auto& [m, co] : terms_) r.terms_.emplace(m, co * q);
  return r;
}

Poly Poly::pow(unsigned e) const {
  Poly r(Rational(1));
  Poly base = *this;
  while (e > 0) {
    if (e & 1u) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

Poly Poly::derivative(VarId v) const {
  Poly r;
  for (auto& [m, c] : terms_) {
    auto [rest, e] = m.without(v);
    if (e == 0) continue;
    Monomial dm = rest;
    if (e > 1) {
      dm.exps.emplace_back(v.index, e - 1);
      std::sort(dm.exps.begin(), dm.exps.end());
    }
    r.add_term(dm, c * Rational(e));
  }
  return r;
}

Poly Poly::coeff_of(VarId v, unsigned k) const {
  Poly r;
  for (auto& [m, c] : terms_) {
    auto [rest, e] = m.without(v);
    if (e == k) r.add_term(rest, c);
  }
  return r;
}

std::vector<Poly> Poly::coeffs_in(VarId v) const {
  std::vector<Poly> cs(degree_in(v) + 1);
  for (auto& [m, c] : terms_) {
    auto [rest, e] = m.without(v);
    cs[e].add_term(rest, c);
  }
  return cs;
}

Poly Poly::from_coeffs(const std::vector<Poly>& coeffs, VarId v) {
  Poly r;
  for (std::size_t e = 0; e < coeffs.size(); ++e) {
    if (coeffs[e].is_zero()) continue;
    r += coeffs[e] * Poly::var(v, static_cast<unsigned>(e));
  }
  return r;
}

Poly Poly::subst(VarId v, const Rational& value) const {
  Poly r;
  Rational q = canon(value);
  for (auto& [m, c] : terms_) {
    auto [rest, e] = m.without(v);
    r.add_term(rest, e == 0 ? c : c * rational_pow(q, e));
  }
  return r;
}

Poly Poly::subst(VarId v, const Poly& value) const {
  auto cs = coeffs_in(v);
  // Horner over the coefficient list.
  Poly r;
  for (auto it = cs.rbegin(); it != cs.rend(); ++it) r = r * value + *it;
  return r;
}

Poly Poly::rename(const std::map<std::uint32_t, VarId>& map) const {
  Poly r;
  for (auto& [m, c] : terms_) {
    Monomial nm;
    for (auto& [idx, e] : m.exps) {
      auto it = map.find(idx);
      nm.exps.emplace_back(it == map.end() ? idx : it->second.index, e);
    }
    std::sort(nm.exps.begin(), nm.exps.end());
    // Renaming must stay injective on the support.
    for (std::size_t i = 1; i < nm.exps.size(); ++i)
      if (nm.exps[i].first == nm.exps[i - 1].first)
        throw std::invalid_argument("non-injective variable rename");
    r.add_term(nm, c);
  }
  return r;
}

Rational Poly::eval(const std::map<std::uint32_t, Rational>& point) const {
  Rational acc(0);
  for (auto& [m, c] : terms_) {
    Rational t = c;
    for (auto& [idx, e] : m.exps) {
      auto it = point.find(idx);
      if (it == point.end()) throw std::invalid_argument("eval: unbound variable");
      t *= rational_pow(canon(it->second), e);
    }
    acc += t;
  }
  return acc;
}

std::optional<Poly> Poly::divide_exact(const Poly& o) const {
  if (o.is_zero()) return std::nullopt;
  if (is_zero()) return Poly();
  Poly rem = *this;
  Poly quot;
  const auto& [lm, lc] = *o.terms_.begin();
  while (!rem.is_zero()) {
    const auto& [rm, rc] = *rem.terms_.begin();
    // lm must divide rm.
    Monomial q;
    auto a = rm.exps.begin(), ae = rm.exps.end();
    bool ok = true;
    for (auto& [idx, e] : lm.exps) {
      while (a != ae && a->first < idx) { q.exps.emplace_back(a->first, a->second); ++a; }
      if (a == ae || a->first != idx || a->second < e) { ok = false; break; }
      if (a->second > e) q.exps.emplace_back(idx, a->second - e);
      ++a;
    }
    if (!ok) return std::nullopt;
    q.exps.insert(q.exps.end(), a, ae);
    Poly qt;
    qt.terms_.emplace(std::move(q), rc / lc);
    quot += qt;
    rem -= qt * o;
  }
  return quot;
}

Rational Poly::content() const {
  if (is_zero()) return Rational(1);
  Int num_gcd(0), den_lcm(1);
  for (auto& [m, c] : terms_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
  }
  Rational c(num_gcd, den_lcm);
  c.canonicalize();
  return c;
}

std::pair<Poly, Rational> Poly::primitive_normal() const {
  if (is_zero()) return {Poly(), Rational(1)};
  Rational c = content();
  if (terms_.begin()->second < 0) c = -c;
  Rational factor = Rational(1) / c;
  return {scaled(factor), factor};
}

std::size_t Poly::max_coeff_bits() const {
  std::size_t bits = 0;
  for (auto& [m, c] : terms_) bits = std::max(bits, rational_bits(c));
  return bits;
}

int Poly::compare(const Poly& o) const {
  auto a = terms_.begin(), ae = terms_.end();
  auto b = o.terms_.begin(), be = o.terms_.end();
  MonoGrlexGreater gt;
  while (a != ae && b != be) {
    if (gt(a->first, b->first)) return 1;   // a has an extra leading monomial
    if (gt(b->first, a->first)) return -1;
    int c = cmp(a->second, b->second);
    if (c != 0) return c;
    ++a; ++b;
  }
  if (a != ae) return 1;
  if (b != be) return -1;
  return 0;
}

std::string Poly::to_string(const VarTable& table) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [m, c] : terms_) {
    Rational a = rational_abs(c);
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    bool coeff_shown = false;
    if (m.empty() || a != 1) {
      os << rational_to_string(a);
      coeff_shown = true;
    }
    bool leading = !coeff_shown;
    for (auto& [idx, e] : m.exps) {
      if (!leading || coeff_shown) os << "*";
      coeff_shown = true;
      leading = false;
      os << table.name_of(VarId{idx});
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

}  // namespace mubqe
