#include "mubqe/resultant.hpp"

#include <stdexcept>

#include "mubqe/deadline.hpp"

namespace mubqe {

namespace {

Poly exact_div(const Poly& num, const Poly& den) {
  auto q = num.divide_exact(den);
  if (!q) throw std::logic_error("internal: expected exact polynomial division");
  return *q;
}

}  // namespace

std::pair<Poly, Poly> pseudo_divrem(const Poly& f, const Poly& g, VarId v) {
  if (g.is_zero()) throw std::invalid_argument("pseudo-division by zero polynomial");
  int df = static_cast<int>(f.degree_in(v));
  int dg = static_cast<int>(g.degree_in(v));
  if (df < dg) return {Poly(), f};
  Poly lcg = g.leading_coeff_in(v);
  int steps_needed = df - dg + 1;
  Poly r = f;
  Poly q;
  int steps = 0;
  while (!r.is_zero()) {
    deadline_tick();
    int dr = static_cast<int>(r.degree_in(v));
    if (dr < dg) break;
    Poly t = r.leading_coeff_in(v) * Poly::var(v, static_cast<unsigned>(dr - dg));
    q = q * lcg + t;
    r = r * lcg - t * g;
    ++steps;
  }
  // Pad so the identity uses exactly lc(g)^(df-dg+1).
  for (; steps < steps_needed; ++steps) {
    q = q * lcg;
    r = r * lcg;
  }
  return {q, r};
}

Poly prem(const Poly& f, const Poly& g, VarId v) { return pseudo_divrem(f, g, v).second; }

Poly resultant_any(const Poly& p, const Poly& q, VarId elim) {
  if (p.is_zero() || q.is_zero()) return Poly();
  int m = static_cast<int>(p.degree_in(elim));
  int n = static_cast<int>(q.degree_in(elim));
  if (m == 0 && n == 0) return Poly(Rational(1));
  if (m == 0) return p.pow(static_cast<unsigned>(n));
  if (n == 0) return q.pow(static_cast<unsigned>(m));
  if (m < n) {
    Poly r = resultant_any(q, p, elim);
    return (m % 2 == 1 && n % 2 == 1) ? -r : r;
  }

  // Subresultant polynomial remainder sequence with Cohen's g/h bookkeeping;
  // all divisions below are exact over the coefficient ring.
  Poly a = p, b = q;
  Poly g(Rational(1)), h(Rational(1));
  int sign = 1;
  while (true) {
    deadline_tick();
    int da = static_cast<int>(a.degree_in(elim));
    int db = static_cast<int>(b.degree_in(elim));
    int delta = da - db;
    if (da % 2 == 1 && db % 2 == 1) sign = -sign;
    Poly r = prem(a, b, elim);
    if (r.is_zero()) return Poly();  // positive-degree common factor
    a = std::move(b);
    b = exact_div(r, g * h.pow(static_cast<unsigned>(delta)));
    g = a.leading_coeff_in(elim);
    if (delta > 0) h = exact_div(g.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
    if (b.degree_in(elim) == 0) break;
  }
  int da = static_cast<int>(a.degree_in(elim));
  Poly res = exact_div(b.pow(static_cast<unsigned>(da)), h.pow(static_cast<unsigned>(da - 1)));
  return sign < 0 ? -res : res;
}

Poly resultant(const Poly& p, const Poly& q, VarId elim) {
  if (p.degree_in(elim) == 0 || q.degree_in(elim) == 0)
    throw std::invalid_argument("not-a-polynomial-in-variable");
  return resultant_any(p, q, elim);
}

Poly discriminant(const Poly& p, VarId v) {
  unsigned n = p.degree_in(v);
  if (n < 2) throw std::invalid_argument("discriminant requires degree >= 2");
  Poly res = resultant_any(p, p.derivative(v), v);
  Poly d = exact_div(res, p.leading_coeff_in(v));
  return (n * (n - 1) / 2) % 2 == 1 ? -d : d;
}

Poly det_bareiss(std::vector<std::vector<Poly>> m) {
  std::size_t n = m.size();
  if (n == 0) return Poly(Rational(1));
  int sign = 1;
  Poly prev(Rational(1));
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t pivot = k + 1;
      while (pivot < n && m[pivot][k].is_zero()) ++pivot;
      if (pivot == n) return Poly();
      std::swap(m[k], m[pivot]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        deadline_tick();
        m[i][j] = exact_div(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
      }
      m[i][k] = Poly();
    }
    prev = m[k][k];
  }
  return sign < 0 ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

std::vector<Poly> subresultants(const Poly& p, const Poly& q, VarId elim) {
  int m = static_cast<int>(p.degree_in(elim));
  int n = static_cast<int>(q.degree_in(elim));
  if (m == 0 || n == 0) throw std::invalid_argument("not-a-polynomial-in-variable");
  auto pc = p.coeffs_in(elim);
  auto qc = q.coeffs_in(elim);
  auto coeff = [](const std::vector<Poly>& cs, int d) {
    return (d >= 0 && d < static_cast<int>(cs.size())) ? cs[d] : Poly();
  };
  int kmax = std::min(m, n);
  std::vector<Poly> chain;
  chain.reserve(kmax);
  for (int j = 0; j < kmax; ++j) {
    int size = m + n - 2 * j;
    // Columns: degrees m+n-j-1 down to j+1, then degree j.
    std::vector<int> coldeg(size);
    for (int c = 0; c < size - 1; ++c) coldeg[c] = m + n - j - 1 - c;
    coldeg[size - 1] = j;
    std::vector<std::vector<Poly>> mat(size, std::vector<Poly>(size));
    for (int r = 0; r < n - j; ++r) {
      int shift = n - j - 1 - r;  // row is x^shift * p
      for (int c = 0; c < size; ++c) mat[r][c] = coeff(pc, coldeg[c] - shift);
    }
    for (int r = 0; r < m - j; ++r) {
      int shift = m - j - 1 - r;  // row is x^shift * q
      for (int c = 0; c < size; ++c) mat[n - j + r][c] = coeff(qc, coldeg[c] - shift);
    }
    chain.push_back(det_bareiss(std::move(mat)));
  }
  return chain;
}

Poly content_in(const Poly& p, VarId v) {
  Poly g;
  for (auto& c : p.coeffs_in(v)) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant() && !g.is_zero()) return Poly(Rational(1));
  }
  return g;
}

Poly primitive_part_in(const Poly& p, VarId v) {
  if (p.is_zero()) return p;
  Poly c = content_in(p, v);
  if (c.is_constant()) return p;
  return exact_div(p, c);
}

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.is_zero() ? Poly() : b.primitive_normal().first;
  if (b.is_zero()) return a.primitive_normal().first;
  if (a.is_constant() || b.is_constant()) return Poly(Rational(1));

  // Main variable: smallest index mentioned by both.
  auto va = a.vars();
  auto vb = b.vars();
  VarId v{0};
  bool found = false;
  for (auto x : va) {
    if (vb.count(x)) { v = x; found = true; break; }
  }
  if (!found) return Poly(Rational(1));  // disjoint variables, unit gcd over Q

  Poly ca = content_in(a, v);
  Poly cb = content_in(b, v);
  Poly c = gcd(ca, cb);
  Poly pa = exact_div(a, ca);
  Poly pb = exact_div(b, cb);
  if (pa.degree_in(v) < pb.degree_in(v)) std::swap(pa, pb);

  // Primitive remainder sequence in v.
  while (true) {
    deadline_tick();
    Poly r = prem(pa, pb, v);
    if (r.is_zero()) break;
    if (r.degree_in(v) == 0) {
      pb = Poly(Rational(1));
      break;
    }
    pa = std::move(pb);
    pb = primitive_part_in(r, v);
  }
  return (c * primitive_part_in(pb, v)).primitive_normal().first;
}

Poly squarefree_part(const Poly& p, VarId v) {
  if (p.is_zero()) throw std::invalid_argument("squarefree part of zero polynomial");
  if (p.degree_in(v) == 0) return p.primitive_normal().first;
  Poly g = gcd(p, p.derivative(v));
  if (g.is_constant()) return p.primitive_normal().first;
  auto q = p.divide_exact(g);
  if (!q) throw std::logic_error("internal: gcd does not divide its input");
  return q->primitive_normal().first;
}

}  // namespace mubqe
