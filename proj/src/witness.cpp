#include "mubqe/witness.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace mubqe {

namespace {

// 1/r for nonzero r. Roots of the reversed defining polynomial are the
// reciprocals of the original roots, and x -> 1/x maps an interval on one
// side of zero bijectively onto one, so the reciprocal interval isolates.
RealAlgebraic recip(const RealAlgebraic& r) {
  RealAlgebraic t = r;
  while (!t.is_rational() && t.interval().lo <= 0 && 0 <= t.interval().hi) t.refine();
  if (t.is_rational()) {
    if (t.rational_value() == 0) throw std::invalid_argument("division by zero");
    return RealAlgebraic::from_rational(Rational(1) / t.rational_value());
  }
  Interval iv{Rational(1) / t.interval().hi, Rational(1) / t.interval().lo};
  return RealAlgebraic::from_root(t.defining().reversed(), iv);
}

RealAlgebraic sqrt_of(const Rational& q) {
  if (q == 0) return RealAlgebraic();
  Rational hi = q < 1 ? Rational(1) : q;
  return RealAlgebraic::from_root(UniPoly({-q, Rational(0), Rational(1)}),
                                  {Rational(0), hi});
}

}  // namespace

AlgebraicComplex operator-(const AlgebraicComplex& a) { return {-a.re, -a.im}; }

AlgebraicComplex operator+(const AlgebraicComplex& a, const AlgebraicComplex& b) {
  return {a.re.plus(b.re), a.im.plus(b.im)};
}

AlgebraicComplex operator-(const AlgebraicComplex& a, const AlgebraicComplex& b) {
  return a + (-b);
}

AlgebraicComplex operator*(const AlgebraicComplex& a, const AlgebraicComplex& b) {
  return {a.re.times(b.re).plus(-(a.im.times(b.im))),
          a.re.times(b.im).plus(a.im.times(b.re))};
}

AlgebraicComplex operator/(const AlgebraicComplex& a, const AlgebraicComplex& b) {
  RealAlgebraic n2 = b.re.times(b.re).plus(b.im.times(b.im));
  if (n2.sign() == 0) throw std::invalid_argument("division by zero");
  RealAlgebraic inv = recip(n2);
  AlgebraicComplex num = a * AlgebraicComplex{b.re, -b.im};
  return {num.re.times(inv), num.im.times(inv)};
}

namespace {

// Recursive descent over one entry. Values stay exact at every step; sqrt is
// only admitted on arguments that evaluated to a positive rational, which is
// all the shipped witnesses need.
struct EntryParser {
  const std::string& s;
  std::size_t pos = 0;

  explicit EntryParser(const std::string& text) : s(text) {}

  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument(what + " in entry '" + s + "'");
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  AlgebraicComplex parse_expr() {
    AlgebraicComplex acc = parse_term();
    while (true) {
      if (eat('+')) acc = acc + parse_term();
      else if (eat('-')) acc = acc - parse_term();
      else return acc;
    }
  }

  AlgebraicComplex parse_term() {
    AlgebraicComplex acc = parse_factor();
    while (true) {
      if (eat('*')) acc = acc * parse_factor();
      else if (eat('/')) acc = acc / parse_factor();
      else return acc;
    }
  }

  AlgebraicComplex parse_factor() {
    if (eat('-')) return -parse_factor();
    return parse_primary();
  }

  AlgebraicComplex parse_primary() {
    char c = peek();
    if (c == '(') {
      ++pos;
      AlgebraicComplex v = parse_expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      Rational q(s.substr(start, pos - start));
      return {RealAlgebraic::from_rational(q), RealAlgebraic()};
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos;
      while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
      std::string word = s.substr(start, pos - start);
      if (word == "i") return {RealAlgebraic(), RealAlgebraic::from_rational(Rational(1))};
      if (word == "sqrt") {
        if (!eat('(')) fail("sqrt needs a parenthesized argument");
        AlgebraicComplex arg = parse_expr();
        if (!eat(')')) fail("missing ')'");
        if (arg.im.sign() != 0 || !arg.re.is_rational())
          fail("unsupported construct: sqrt argument must be rational");
        const Rational& q = arg.re.rational_value();
        if (q < 0) fail("unsupported construct: sqrt of a negative rational");
        return {sqrt_of(q), RealAlgebraic()};
      }
      fail("unsupported construct '" + word + "'");
    }
    fail("expected a value");
  }

  AlgebraicComplex run() {
    skip_ws();
    if (pos == s.size()) fail("empty entry");
    AlgebraicComplex v = parse_expr();
    skip_ws();
    if (pos != s.size()) fail("trailing input");
    return v;
  }
};

}  // namespace

AlgebraicComplex parse_algebraic(const std::string& text) {
  return EntryParser(text).run();
}

BasisSet parse_witness(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (!blank) lines.push_back(line);
  }
  if (lines.empty()) throw std::invalid_argument("witness: empty input");

  unsigned k = 0, d = 0;
  {
    std::istringstream hdr(lines[0]);
    std::string extra;
    if (!(hdr >> k >> d) || (hdr >> extra))
      throw std::invalid_argument("witness: header must be 'k d'");
  }
  if (k == 0 || d == 0) throw std::invalid_argument("witness: k and d must be positive");
  if (lines.size() != 1 + static_cast<std::size_t>(k) * d)
    throw std::invalid_argument("witness: expected " + std::to_string(k * d) +
                                " vector lines, got " + std::to_string(lines.size() - 1));

  BasisSet b;
  b.d = d;
  b.bases.assign(k, {});
  for (unsigned m = 0; m < k; ++m) {
    for (unsigned i = 0; i < d; ++i) {
      const std::string& row = lines[1 + static_cast<std::size_t>(m) * d + i];
      std::vector<AlgebraicComplex> vec;
      std::size_t from = 0;
      while (true) {
        std::size_t comma = row.find(',', from);
        vec.push_back(parse_algebraic(row.substr(from, comma - from)));
        if (comma == std::string::npos) break;
        from = comma + 1;
      }
      if (vec.size() != d)
        throw std::invalid_argument("witness: basis " + std::to_string(m) + " vector " +
                                    std::to_string(i) + " has " + std::to_string(vec.size()) +
                                    " entries, expected " + std::to_string(d));
      b.bases[m].push_back(std::move(vec));
    }
  }
  return b;
}

namespace {

// Variable slots for the pairwise polynomials: vector a occupies slots
// [0, 2d), vector b slots [2d, 4d), each component as (re, im).
Poly slot(std::size_t idx) { return Poly::var(VarId{static_cast<std::uint32_t>(idx)}); }

void push_vector(const std::vector<AlgebraicComplex>& v,
                 std::vector<RealAlgebraic>& point) {
  for (const AlgebraicComplex& e : v) {
    point.push_back(e.re);
    point.push_back(e.im);
  }
}

std::vector<VarId> slot_ids(std::size_t n) {
  std::vector<VarId> ids;
  ids.reserve(n);
  for (std::size_t t = 0; t < n; ++t) ids.push_back(VarId{static_cast<std::uint32_t>(t)});
  return ids;
}

// sum_j |v_j|^2 - 1 over one vector's slots.
bool normalized(const std::vector<AlgebraicComplex>& v) {
  std::size_t d = v.size();
  Poly s;
  for (std::size_t j = 0; j < d; ++j)
    s += slot(2 * j) * slot(2 * j) + slot(2 * j + 1) * slot(2 * j + 1);
  s += Poly(Rational(-1));
  std::vector<RealAlgebraic> point;
  push_vector(v, point);
  return alg_sign(s, point, slot_ids(2 * d)) == 0;
}

// |<a|b>|^2 - target over both vectors' slots; the inner product conjugates
// the first argument.
bool inner_sq_is(const std::vector<AlgebraicComplex>& a,
                 const std::vector<AlgebraicComplex>& b, const Rational& target) {
  std::size_t d = a.size();
  Poly zre, zim;
  for (std::size_t j = 0; j < d; ++j) {
    Poly are = slot(2 * j), aim = slot(2 * j + 1);
    Poly bre = slot(2 * d + 2 * j), bim = slot(2 * d + 2 * j + 1);
    zre += are * bre + aim * bim;
    zim += are * bim - aim * bre;
  }
  Poly s = zre * zre + zim * zim - Poly(target);
  std::vector<RealAlgebraic> point;
  push_vector(a, point);
  push_vector(b, point);
  return alg_sign(s, point, slot_ids(4 * d)) == 0;
}

}  // namespace

std::string describe(const Violation& v) {
  std::ostringstream os;
  os << eq_kind_name(v.clause) << " fails for basis " << v.basis_a << " vector " << v.vec_a;
  if (v.clause != EqKind::Normalization)
    os << " against basis " << v.basis_b << " vector " << v.vec_b;
  return os.str();
}

VerifyReport verify_mubs(const BasisSet& b) {
  if (b.d == 0 || b.bases.empty())
    throw std::invalid_argument("verify: empty basis set");
  for (unsigned m = 0; m < b.k(); ++m) {
    if (b.bases[m].size() != b.d)
      throw std::invalid_argument("verify: basis " + std::to_string(m) + " has " +
                                  std::to_string(b.bases[m].size()) +
                                  " vectors, expected " + std::to_string(b.d));
    for (unsigned i = 0; i < b.d; ++i)
      if (b.bases[m][i].size() != b.d)
        throw std::invalid_argument("verify: basis " + std::to_string(m) + " vector " +
                                    std::to_string(i) + " has " +
                                    std::to_string(b.bases[m][i].size()) +
                                    " entries, expected " + std::to_string(b.d));
  }

  VerifyReport rep;
  auto violated = [&rep](EqKind c, unsigned ma, unsigned ia, unsigned mb, unsigned ib) {
    rep.verdict = false;
    rep.violation = Violation{c, ma, ia, mb, ib};
    return rep;
  };

  for (unsigned m = 0; m < b.k(); ++m) {
    for (unsigned i = 0; i < b.d; ++i)
      if (!normalized(b.bases[m][i]))
        return violated(EqKind::Normalization, m, i, m, i);
    for (unsigned i = 0; i < b.d; ++i)
      for (unsigned j = i + 1; j < b.d; ++j)
        if (!inner_sq_is(b.bases[m][i], b.bases[m][j], Rational(0)))
          return violated(EqKind::Orthogonality, m, i, m, j);
  }
  Rational unb(1, b.d);
  for (unsigned m = 0; m < b.k(); ++m)
    for (unsigned n = m + 1; n < b.k(); ++n)
      for (unsigned i = 0; i < b.d; ++i)
        for (unsigned j = 0; j < b.d; ++j)
          if (!inner_sq_is(b.bases[m][i], b.bases[n][j], unb))
            return violated(EqKind::Unbiasedness, m, i, n, j);

  rep.verdict = true;
  return rep;
}

}  // namespace mubqe
