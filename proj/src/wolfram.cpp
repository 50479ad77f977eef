#include "mubqe/wolfram.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "mubqe/complexpoly.hpp"

namespace mubqe {

namespace {

std::string radical_text(unsigned d) { return "Sqrt[1/" + std::to_string(d) + "]"; }

std::string var_text(VarId v, const VarTable& names,
                     const std::map<VarId, unsigned>& radicals) {
  auto it = radicals.find(v);
  return it != radicals.end() ? radical_text(it->second) : names.name_of(v);
}

Rational constant_term(const Poly& p) {
  for (auto& [m, c] : p.terms())
    if (m.empty()) return c;
  return Rational(0);
}

const char* wolfram_rel(Rel r) {
  switch (r) {
    case Rel::Eq: return "==";
    case Rel::Ne: return "!=";
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Gt: return ">";
    case Rel::Ge: return ">=";
  }
  return "";
}

// Operand contexts, loosest to tightest; a child renders parenthesized when
// its connective binds looser than the position requires.
enum Ctx { kTop, kInOr, kInAnd };

struct Renderer {
  const VarTable& names;
  const std::map<VarId, unsigned>& radicals;
  std::ostringstream os;

  void poly(const Poly& p) {
    if (p.is_zero()) {
      os << "0";
      return;
    }
    bool first = true;
    for (auto& [m, c] : p.terms()) {
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
      for (auto& [idx, e] : m.exps) {
        if (coeff_shown) os << "*";
        coeff_shown = true;
        os << var_text(VarId{idx}, names, radicals);
        if (e > 1) os << "^" << e;
      }
    }
  }

  void atom(const Poly& lhs, Rel rel) {
    Rational c = constant_term(lhs);
    Poly body = lhs - Poly(c);
    poly(body);
    os << " " << wolfram_rel(rel) << " " << rational_to_string(Rational(-c));
  }

  void quantifier(const FormulaPtr& f) {
    FKind k = f->kind();
    std::vector<VarId> run;
    FormulaPtr body = f;
    while (body->kind() == k) {
      if (!radicals.count(body->var())) run.push_back(body->var());
      body = body->child();
    }
    if (run.empty()) {
      render(body, kTop);
      return;
    }
    os << (k == FKind::Exists ? "Exists[{" : "ForAll[{");
    for (std::size_t i = 0; i < run.size(); ++i) {
      if (i) os << ", ";
      os << names.name_of(run[i]);
    }
    os << "}, ";
    render(body, kTop);
    os << "]";
  }

  void render(const FormulaPtr& f, Ctx ctx) {
    switch (f->kind()) {
      case FKind::True: os << "True"; return;
      case FKind::False: os << "False"; return;
      case FKind::Atom: atom(f->lhs(), f->rel()); return;
      case FKind::Not:
        os << "!(";
        render(f->child(), kTop);
        os << ")";
        return;
      case FKind::And:
        render(f->left(), kInAnd);
        os << " && ";
        render(f->right(), kInAnd);
        return;
      case FKind::Or:
        if (ctx == kInAnd) os << "(";
        render(f->left(), kInOr);
        os << " || ";
        render(f->right(), kInOr);
        if (ctx == kInAnd) os << ")";
        return;
      case FKind::Implies:
        os << "Implies[";
        render(f->left(), kTop);
        os << ", ";
        render(f->right(), kTop);
        os << "]";
        return;
      case FKind::Exists:
      case FKind::Forall:
        quantifier(f);
        return;
    }
  }
};

}  // namespace

std::string poly_to_wolfram(const Poly& p, const VarTable& names,
                            const std::map<VarId, unsigned>& inline_radicals) {
  Renderer r{names, inline_radicals};
  r.poly(p);
  return std::move(r.os).str();
}

std::string to_wolfram(const FormulaPtr& f, const VarTable& names,
                       const std::map<VarId, unsigned>& inline_radicals) {
  Renderer r{names, inline_radicals};
  r.render(f, kTop);
  return std::move(r.os).str();
}

std::string equation_to_wolfram(const MubSystem& sys, const MubEquation& eq,
                                bool inline_radicals) {
  std::map<VarId, unsigned> radicals;
  if (inline_radicals && sys.sqrt_id) radicals.emplace(*sys.sqrt_id, sys.d());

  // Without component expressions (or when the radical would leak into the
  // display as a phantom variable) the stored polynomial is the truth.
  bool structured = sys.has_components() && (inline_radicals || sys.sqrt_symbolic);
  if (!structured) {
    Renderer r{sys.names, radicals};
    r.atom(eq.lhs, Rel::Eq);
    return std::move(r.os).str();
  }

  auto ket = [&sys](unsigned m, unsigned i) {
    std::vector<ComplexExpr> v;
    for (unsigned j = 0; j < sys.d(); ++j)
      v.push_back(m == sys.k() ? sys.extra_vector[j] : sys.component(m, i, j));
    return v;
  };

  Renderer r{sys.names, radicals};
  if (eq.kind == EqKind::Normalization) {
    Poly s;
    for (unsigned j = 0; j < sys.d(); ++j) {
      ComplexExpr c = eq.basis_a == sys.k() ? sys.extra_vector[j]
                                            : sys.component(eq.basis_a, eq.vec_a, j);
      s += c.mod_squared();
    }
    r.poly(s);
    r.os << " == 1";
    return std::move(r.os).str();
  }

  ComplexExpr z = inner_product(ket(eq.basis_a, eq.vec_a), ket(eq.basis_b, eq.vec_b));
  r.os << "(";
  r.poly(z.re());
  r.os << ")^2 + (";
  r.poly(z.im());
  r.os << ")^2 == ";
  r.os << (eq.kind == EqKind::Orthogonality ? "0" : "1/" + std::to_string(sys.d()));
  return std::move(r.os).str();
}

// ---------------------------------------------------------------------------
// Reader for the same fragment.

namespace {

enum class Tok { End, Int, Ident, Sym };

struct Token {
  Tok kind = Tok::End;
  std::string text;
};

struct Lexer {
  std::vector<Token> toks;

  explicit Lexer(const std::string& s) {
    std::size_t i = 0;
    auto sym = [&](const std::string& t) { toks.push_back({Tok::Sym, t}); };
    while (i < s.size()) {
      char c = s[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        toks.push_back({Tok::Int, s.substr(i, j - i)});
        i = j;
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
          ++j;
        toks.push_back({Tok::Ident, s.substr(i, j - i)});
        i = j;
        continue;
      }
      if ((c == '&' || c == '|') && i + 1 < s.size() && s[i + 1] == c) {
        sym(std::string(2, c));
        i += 2;
        continue;
      }
      if ((c == '=' || c == '!' || c == '<' || c == '>') && i + 1 < s.size() &&
          s[i + 1] == '=') {
        sym(std::string{c} + "=");
        i += 2;
        continue;
      }
      if (std::string("!<>+-*/^()[]{},").find(c) != std::string::npos) {
        sym(std::string(1, c));
        ++i;
        continue;
      }
      throw std::invalid_argument(std::string("unsupported character '") + c + "'");
    }
    toks.push_back({Tok::End, ""});
  }
};

struct Reader {
  std::vector<Token> toks;
  std::size_t pos = 0;
  VarTable& table;

  Reader(const std::string& s, VarTable& t) : toks(Lexer(s).toks), table(t) {}

  [[noreturn]] void fail(const std::string& what) {
    const Token& t = toks[pos];
    std::string where = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw std::invalid_argument(what + " at " + where);
  }

  const Token& peek() const { return toks[pos]; }

  bool eat(const std::string& sym) {
    if (toks[pos].kind == Tok::Sym && toks[pos].text == sym) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(const std::string& sym) {
    if (!eat(sym)) fail("expected '" + sym + "'");
  }

  bool at_rel() const {
    const Token& t = toks[pos];
    if (t.kind != Tok::Sym) return false;
    return t.text == "==" || t.text == "!=" || t.text == "<" || t.text == "<=" ||
           t.text == ">" || t.text == ">=";
  }

  static bool reserved(const std::string& w) {
    return w == "True" || w == "False" || w == "Exists" || w == "ForAll" ||
           w == "Implies" || w == "Sqrt";
  }

  // --- polynomial layer ---

  Poly patom() {
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      Poly p{Rational(t.text)};
      ++pos;
      return p;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "Sqrt") fail("Sqrt has no exact polynomial reading");
      if (reserved(t.text)) fail("misplaced keyword");
      Poly p = Poly::var(table.intern(t.text));
      ++pos;
      return p;
    }
    if (eat("(")) {
      Poly p = poly();
      expect(")");
      return p;
    }
    fail("expected a term");
  }

  Poly ppow() {
    Poly base = patom();
    if (!eat("^")) return base;
    if (peek().kind != Tok::Int) fail("expected an integer exponent");
    unsigned long e = std::stoul(peek().text);
    ++pos;
    return base.pow(static_cast<unsigned>(e));
  }

  Poly pfactor() {
    if (eat("-")) return -pfactor();
    return ppow();
  }

  Poly pterm() {
    Poly acc = pfactor();
    while (true) {
      if (eat("*")) {
        acc = acc * pfactor();
      } else if (eat("/")) {
        Poly den = pfactor();
        if (!den.is_constant() || den.is_zero()) fail("divisor must be a nonzero rational");
        acc = acc.scaled(Rational(1) / den.constant_value());
      } else {
        return acc;
      }
    }
  }

  Poly poly() {
    Poly acc = pterm();
    while (true) {
      if (eat("+")) acc += pterm();
      else if (eat("-")) acc -= pterm();
      else return acc;
    }
  }

  // --- formula layer ---

  Rel rel() {
    const std::string& s = peek().text;
    ++pos;
    if (s == "==") return Rel::Eq;
    if (s == "!=") return Rel::Ne;
    if (s == "<") return Rel::Lt;
    if (s == "<=") return Rel::Le;
    if (s == ">") return Rel::Gt;
    return Rel::Ge;
  }

  FormulaPtr atom() {
    Poly lhs = poly();
    if (!at_rel()) fail("expected a relation");
    Rel r = rel();
    Poly rhs = poly();
    return f_atom(lhs - rhs, r);
  }

  std::vector<VarId> var_list() {
    expect("{");
    std::vector<VarId> vars;
    do {
      if (peek().kind != Tok::Ident || reserved(peek().text)) fail("expected a variable");
      vars.push_back(table.intern(peek().text));
      ++pos;
    } while (eat(","));
    expect("}");
    return vars;
  }

  // A '(' opens a polynomial exactly when its matching ')' is followed by
  // more arithmetic or a relation; otherwise it groups a formula.
  bool paren_is_poly() const {
    std::size_t depth = 0;
    for (std::size_t i = pos; i < toks.size(); ++i) {
      const Token& t = toks[i];
      if (t.kind != Tok::Sym) continue;
      if (t.text == "(") ++depth;
      if (t.text == ")") {
        if (--depth == 0) {
          const Token& n = toks[i + 1];
          if (n.kind != Tok::Sym) return false;
          return n.text == "+" || n.text == "-" || n.text == "*" || n.text == "/" ||
                 n.text == "^" || n.text == "==" || n.text == "!=" || n.text == "<" ||
                 n.text == "<=" || n.text == ">" || n.text == ">=";
        }
      }
    }
    return false;  // unbalanced; let the formula path report it
  }

  FormulaPtr primary() {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      if (t.text == "True") {
        ++pos;
        return f_true();
      }
      if (t.text == "False") {
        ++pos;
        return f_false();
      }
      if (t.text == "Exists" || t.text == "ForAll") {
        bool exists = t.text == "Exists";
        ++pos;
        expect("[");
        std::vector<VarId> vars = var_list();
        expect(",");
        FormulaPtr body = formula();
        expect("]");
        for (auto it = vars.rbegin(); it != vars.rend(); ++it)
          body = exists ? f_exists(*it, body) : f_forall(*it, body);
        return body;
      }
      if (t.text == "Implies") {
        ++pos;
        expect("[");
        FormulaPtr a = formula();
        expect(",");
        FormulaPtr b = formula();
        expect("]");
        return f_implies(a, b);
      }
      if (t.text == "Sqrt") fail("Sqrt has no exact polynomial reading");
      return atom();
    }
    if (t.kind == Tok::Sym && t.text == "(" && !paren_is_poly()) {
      ++pos;
      FormulaPtr f = formula();
      expect(")");
      return f;
    }
    return atom();
  }

  FormulaPtr unary() {
    if (eat("!")) return f_not(unary());
    return primary();
  }

  FormulaPtr conjunction() {
    FormulaPtr acc = unary();
    while (eat("&&")) acc = f_and(acc, unary());
    return acc;
  }

  FormulaPtr formula() {
    FormulaPtr acc = conjunction();
    while (eat("||")) acc = f_or(acc, conjunction());
    return acc;
  }

  FormulaPtr run() {
    FormulaPtr f = formula();
    if (peek().kind != Tok::End) fail("trailing input");
    return f;
  }
};

}  // namespace

FormulaPtr from_wolfram(const std::string& text, VarTable& table) {
  return Reader(text, table).run();
}

}  // namespace mubqe
