#include "mubqe/unipoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "mubqe/deadline.hpp"

namespace mubqe {

namespace {

// Scales by a positive rational only, so sign patterns (Sturm chains) are
// preserved while coefficients stay integer-primitive.
UniPoly positive_primitive(const UniPoly& p) {
  if (p.is_zero()) return p;
  Int num_gcd(0), den_lcm(1);
  for (auto& c : p.coeffs()) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
  }
  Rational f(den_lcm, num_gcd);
  f.canonicalize();
  return p.scaled(f);
}

}  // namespace

UniPoly::UniPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c.canonicalize();
  trim();
}

void UniPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

UniPoly UniPoly::constant(const Rational& c) { return UniPoly(std::vector<Rational>{c}); }

UniPoly UniPoly::x() { return UniPoly({Rational(0), Rational(1)}); }

UniPoly UniPoly::from_poly(const Poly& p, VarId v) {
  std::vector<Rational> cs(p.degree_in(v) + 1, Rational(0));
  for (auto& [m, c] : p.terms()) {
    auto [rest, e] = m.without(v);
    if (!rest.empty())
      throw std::invalid_argument("from_poly: polynomial is not univariate in the given variable");
    cs[e] += c;
  }
  return UniPoly(std::move(cs));
}

Poly UniPoly::to_poly(VarId v) const {
  Poly p;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    Monomial m;
    if (i > 0) m.exps.emplace_back(v.index, static_cast<unsigned>(i));
    p.add_term(m, coeffs_[i]);
  }
  return p;
}

Rational UniPoly::coeff(unsigned i) const {
  return i < coeffs_.size() ? coeffs_[i] : Rational(0);
}

const Rational& UniPoly::lc() const {
  if (coeffs_.empty()) throw std::logic_error("lc of zero polynomial");
  return coeffs_.back();
}

UniPoly UniPoly::operator-() const {
  UniPoly r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
  std::vector<Rational> cs(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) cs[i] += coeffs_[i];
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) cs[i] += o.coeffs_[i];
  UniPoly r;
  r.coeffs_ = std::move(cs);
  r.trim();
  return r;
}

UniPoly UniPoly::operator-(const UniPoly& o) const { return *this + (-o); }

UniPoly UniPoly::operator*(const UniPoly& o) const {
  if (is_zero() || o.is_zero()) return UniPoly();
  std::vector<Rational> cs(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) cs[i + j] += coeffs_[i] * o.coeffs_[j];
  UniPoly r;
  r.coeffs_ = std::move(cs);
  r.trim();
  return r;
}

UniPoly UniPoly::scaled(const Rational& c) const {
  if (c == 0) return UniPoly();
  UniPoly r = *this;
  for (auto& x : r.coeffs_) x *= c;
  return r;
}

UniPoly UniPoly::derivative() const {
  if (coeffs_.size() <= 1) return UniPoly();
  std::vector<Rational> cs(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) cs[i - 1] = coeffs_[i] * Rational(static_cast<long>(i));
  UniPoly r;
  r.coeffs_ = std::move(cs);
  r.trim();
  return r;
}

Rational UniPoly::eval(const Rational& x) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int UniPoly::sign_at(const Rational& x) const { return sign_of(eval(x)); }

std::pair<UniPoly, UniPoly> UniPoly::divrem(const UniPoly& o) const {
  if (o.is_zero()) throw std::invalid_argument("division by zero polynomial");
  UniPoly rem = *this;
  int dq = degree() - o.degree();
  if (dq < 0) return {UniPoly(), rem};
  std::vector<Rational> q(dq + 1, Rational(0));
  while (!rem.is_zero() && rem.degree() >= o.degree()) {
    deadline_tick();
    int shift = rem.degree() - o.degree();
    Rational factor = rem.lc() / o.lc();
    q[shift] = factor;
    // rem -= factor * x^shift * o
    for (int i = 0; i <= o.degree(); ++i)
      rem.coeffs_[i + shift] -= factor * o.coeffs_[i];
    rem.trim();
  }
  UniPoly quot;
  quot.coeffs_ = std::move(q);
  quot.trim();
  return {quot, rem};
}

UniPoly UniPoly::mod(const UniPoly& o) const { return divrem(o).second; }

UniPoly UniPoly::monic() const {
  if (is_zero()) return *this;
  return scaled(Rational(1) / lc());
}

UniPoly UniPoly::primitive() const {
  if (is_zero()) return *this;
  UniPoly r = positive_primitive(*this);
  if (r.lc() < 0) r = -r;
  return r;
}

UniPoly gcd(const UniPoly& a, const UniPoly& b) {
  UniPoly r0 = a.primitive(), r1 = b.primitive();
  while (!r1.is_zero()) {
    deadline_tick();
    UniPoly r2 = r0.mod(r1).primitive();
    r0 = std::move(r1);
    r1 = std::move(r2);
  }
  return r0.primitive();
}

UniPoly UniPoly::squarefree_part() const {
  if (is_zero()) throw std::invalid_argument("squarefree part of zero polynomial");
  if (degree() <= 1) return primitive();
  UniPoly g = gcd(*this, derivative());
  if (g.degree() == 0) return primitive();
  return divrem(g).first.primitive();
}

Rational UniPoly::root_bound() const {
  if (degree() <= 0) return Rational(1);
  Rational m(0);
  for (int i = 0; i < degree(); ++i) {
    Rational q = rational_abs(coeffs_[i] / lc());
    if (q > m) m = q;
  }
  Rational b = m + 1;
  Int ceilb;
  mpz_cdiv_q(ceilb.get_mpz_t(), b.get_num().get_mpz_t(), b.get_den().get_mpz_t());
  return Rational(ceilb);
}

UniPoly UniPoly::shifted(const Rational& t) const {
  UniPoly r = *this;
  int n = r.degree();
  for (int i = 0; i < n; ++i)
    for (int j = n - 1; j >= i; --j) r.coeffs_[j] += t * r.coeffs_[j + 1];
  return r;
}

UniPoly UniPoly::scaled_arg(const Rational& c) const {
  UniPoly r = *this;
  Rational p(1);
  for (std::size_t i = 1; i < r.coeffs_.size(); ++i) {
    p *= c;
    r.coeffs_[i] *= p;
  }
  r.trim();
  return r;
}

UniPoly UniPoly::reversed() const {
  UniPoly r = *this;
  std::reverse(r.coeffs_.begin(), r.coeffs_.end());
  r.trim();
  return r;
}

std::string UniPoly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Rational& c = coeffs_[i];
    if (c == 0) continue;
    Rational a = rational_abs(c);
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (i == 0 || a != 1) {
      os << rational_to_string(a);
      if (i > 0) os << "*";
    }
    if (i > 0) {
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

std::vector<UniPoly> sturm_chain(const UniPoly& p) {
  std::vector<UniPoly> chain;
  if (p.is_zero()) return chain;
  chain.push_back(positive_primitive(p));
  UniPoly d = p.derivative();
  if (d.is_zero()) return chain;
  chain.push_back(positive_primitive(d));
  while (true) {
    deadline_tick();
    const UniPoly& a = chain[chain.size() - 2];
    const UniPoly& b = chain.back();
    UniPoly r = a.mod(b);
    if (r.is_zero()) break;
    chain.push_back(positive_primitive(-r));
  }
  return chain;
}

namespace {

int count_variations(const std::vector<int>& signs) {
  int v = 0;
  int prev = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++v;
    prev = s;
  }
  return v;
}

}  // namespace

int sign_variations_at(const std::vector<UniPoly>& chain, const Rational& x) {
  std::vector<int> signs;
  signs.reserve(chain.size());
  for (auto& p : chain) signs.push_back(p.sign_at(x));
  return count_variations(signs);
}

int sign_variations_at_inf(const std::vector<UniPoly>& chain, int dir) {
  std::vector<int> signs;
  signs.reserve(chain.size());
  for (auto& p : chain) {
    if (p.is_zero()) { signs.push_back(0); continue; }
    int s = sign_of(p.lc());
    if (dir < 0 && p.degree() % 2 == 1) s = -s;
    signs.push_back(s);
  }
  return count_variations(signs);
}

int count_roots_in(const std::vector<UniPoly>& chain, const Rational& a, const Rational& b) {
  if (a >= b) return 0;
  return sign_variations_at(chain, a) - sign_variations_at(chain, b);
}

int count_real_roots(const UniPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("count_real_roots of zero polynomial");
  if (p.degree() == 0) return 0;
  auto chain = sturm_chain(p);
  return sign_variations_at_inf(chain, -1) - sign_variations_at_inf(chain, +1);
}

namespace {

// Upper bound (exact when 0 or 1) on the number of roots of q in open (0, 1),
// via the Moebius transform x -> 1/(1+x) and Descartes' rule of signs.
int descartes_bound01(const UniPoly& q) {
  UniPoly r = q.reversed().shifted(Rational(1));
  int v = 0, prev = 0;
  for (auto& c : r.coeffs()) {
    int s = sign_of(c);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++v;
    prev = s;
  }
  return v;
}

// An emitted open interval holds exactly one root, but a sibling split may
// have left a different root of f sitting exactly on an endpoint. Shrink
// until both endpoint signs are nonzero so bisection refinement stays sound.
Interval clear_endpoints(const UniPoly& f, std::vector<UniPoly>& chain, Interval iv) {
  while (!iv.is_point()) {
    deadline_tick();
    int slo = f.sign_at(iv.lo), shi = f.sign_at(iv.hi);
    if (slo != 0 && shi != 0) break;
    Rational m = iv.mid();
    int sm = f.sign_at(m);
    if (sm == 0) return {m, m};  // the midpoint is the tracked root itself
    bool root_left;
    if (slo != 0) root_left = slo * sm < 0;
    else if (shi != 0) root_left = sm * shi > 0;  // same sign: right half is rootless
    else {
      // Both endpoints are (foreign) roots; settle the half by Sturm count.
      if (chain.empty()) chain = sturm_chain(f);
      root_left = count_roots_in(chain, iv.lo, m) == 1;
    }
    if (root_left) iv.hi = m; else iv.lo = m;
  }
  return iv;
}

// Roots of q in open (0, 1) correspond linearly to roots of the input in
// open (lo, hi). Appends isolating intervals in increasing order.
void isolate01(const UniPoly& q, const Rational& lo, const Rational& hi,
               std::vector<Interval>& out) {
  deadline_tick();
  int v = descartes_bound01(q);
  if (v == 0) return;
  if (v == 1) {
    out.push_back({lo, hi});
    return;
  }
  Rational mid = (lo + hi) / 2;
  UniPoly left = q.scaled_arg(Rational(1, 2));  // q(x/2), covers (0, 1/2)
  UniPoly right = left.shifted(Rational(1));    // q((x+1)/2), covers (1/2, 1)
  isolate01(left, lo, mid, out);
  if (q.sign_at(Rational(1, 2)) == 0) out.push_back({mid, mid});
  isolate01(right, mid, hi, out);
}

}  // namespace

std::vector<Interval> isolate_roots(const UniPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("isolate_roots of zero polynomial");
  UniPoly f = p.squarefree_part();
  const UniPoly full = f;
  std::vector<Interval> out;
  if (f.degree() <= 0) return out;

  bool root_at_zero = false;
  if (f.coeff(0) == 0) {
    // f is squarefree, so x divides exactly once.
    root_at_zero = true;
    std::vector<Rational> cs(f.coeffs().begin() + 1, f.coeffs().end());
    f = UniPoly(std::move(cs));
  }

  Rational b = f.root_bound();

  // Negative roots: u in (0, 1) with f(-b*u) = 0 maps to -b*u in (-b, 0).
  std::vector<Interval> neg;
  isolate01(f.scaled_arg(-b), Rational(0), b, neg);
  for (auto it = neg.rbegin(); it != neg.rend(); ++it) out.push_back({-it->hi, -it->lo});

  if (root_at_zero) out.push_back({Rational(0), Rational(0)});

  isolate01(f.scaled_arg(b), Rational(0), b, out);

  std::vector<UniPoly> chain;
  for (auto& iv : out)
    if (!iv.is_point()) iv = clear_endpoints(full, chain, iv);
  return out;
}

void refine_step(const UniPoly& p, Interval& iv) {
  if (iv.is_point()) return;
  Rational mid = iv.mid();
  int sm = p.sign_at(mid);
  if (sm == 0) {
    iv.lo = mid;
    iv.hi = mid;
    return;
  }
  if (p.sign_at(iv.lo) != sm) iv.hi = mid;
  else iv.lo = mid;
}

void refine_below(const UniPoly& p, Interval& iv, const Rational& eps) {
  while (!iv.is_point() && iv.width() > eps) {
    deadline_tick();
    refine_step(p, iv);
  }
}

}  // namespace mubqe
