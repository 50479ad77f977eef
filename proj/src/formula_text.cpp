// Text front end for formulas: a hand-rolled lexer and recursive-descent
// parser for the grammar in formula.hpp, and the canonical printer.
//
// Binding, tightest first: ~, /\, \/, -> (right associative); a quantifier
// scopes as far right as possible. The printer inserts parentheses whenever
// a child binds no tighter than its context requires, so printed text always
// re-parses to an equal formula.
#include <cctype>

#include "mubqe/formula.hpp"

namespace mubqe {

namespace {

enum class Tok {
  Ident, Int,
  LParen, RParen, Plus, Minus, Star, Caret, Slash,
  Eq, Ne, Lt, Le, Gt, Ge,
  Tilde, AndOp, OrOp, Arrow,
  End
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string t, int c) { out.push_back({k, std::move(t), line, c}); };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++i;
      continue;
    }
    int start_col = col;
    auto two = [&](char second) { return i + 1 < text.size() && text[i + 1] == second; };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      push(Tok::Ident, text.substr(i, j - i), start_col);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      push(Tok::Int, text.substr(i, j - i), start_col);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, "(", start_col); break;
      case ')': push(Tok::RParen, ")", start_col); break;
      case '+': push(Tok::Plus, "+", start_col); break;
      case '*': push(Tok::Star, "*", start_col); break;
      case '^': push(Tok::Caret, "^", start_col); break;
      case '~': push(Tok::Tilde, "~", start_col); break;
      case '=': push(Tok::Eq, "=", start_col); break;
      case '-':
        if (two('>')) { push(Tok::Arrow, "->", start_col); ++i; ++col; }
        else push(Tok::Minus, "-", start_col);
        break;
      case '/':
        if (two('\\')) { push(Tok::AndOp, "/\\", start_col); ++i; ++col; }
        else push(Tok::Slash, "/", start_col);
        break;
      case '\\':
        if (two('/')) { push(Tok::OrOp, "\\/", start_col); ++i; ++col; }
        else throw ParseError("stray '\\'", line, start_col);
        break;
      case '!':
        if (two('=')) { push(Tok::Ne, "!=", start_col); ++i; ++col; }
        else throw ParseError("expected '=' after '!'", line, start_col);
        break;
      case '<':
        if (two('=')) { push(Tok::Le, "<=", start_col); ++i; ++col; }
        else push(Tok::Lt, "<", start_col);
        break;
      case '>':
        if (two('=')) { push(Tok::Ge, ">=", start_col); ++i; ++col; }
        else push(Tok::Gt, ">", start_col);
        break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line, start_col);
    }
    ++i;
    ++col;
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, VarTable& table, bool allow_new_vars)
      : toks_(std::move(toks)), table_(table), allow_new_(allow_new_vars) {}

  FormulaPtr formula_then_end() {
    FormulaPtr f = formula();
    expect_end();
    return f;
  }

  Poly term_then_end() {
    Poly t = term();
    expect_end();
    return t;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  VarTable& table_;
  bool allow_new_;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(t.kind == Tok::End ? msg + ", got end of input"
                                        : msg + ", got '" + t.text + "'",
                     t.line, t.col);
  }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    advance();
  }
  void expect_end() {
    if (peek().kind != Tok::End) fail("unexpected trailing input");
  }

  // formula := implic
  FormulaPtr formula() { return implic(); }

  FormulaPtr implic() {
    FormulaPtr a = disj();
    if (peek().kind == Tok::Arrow) {
      advance();
      return f_implies(std::move(a), implic());
    }
    return a;
  }

  FormulaPtr disj() {
    FormulaPtr a = conj();
    while (peek().kind == Tok::OrOp) {
      advance();
      a = f_or(std::move(a), conj());
    }
    return a;
  }

  FormulaPtr conj() {
    FormulaPtr a = negation();
    while (peek().kind == Tok::AndOp) {
      advance();
      a = f_and(std::move(a), negation());
    }
    return a;
  }

  FormulaPtr negation() {
    if (peek().kind == Tok::Tilde) {
      advance();
      return f_not(negation());
    }
    return primary();
  }

  bool at_quantifier() const {
    return peek().kind == Tok::LParen && peek(1).kind == Tok::Ident &&
           (peek(1).text == "E" || peek(1).text == "A") &&
           peek(2).kind == Tok::Ident && peek(3).kind == Tok::RParen;
  }

  FormulaPtr primary() {
    if (peek().kind == Tok::Ident && peek().text == "true") {
      advance();
      return f_true();
    }
    if (peek().kind == Tok::Ident && peek().text == "false") {
      advance();
      return f_false();
    }
    if (at_quantifier()) {
      advance();  // (
      bool exists = peek().text == "E";
      advance();  // E or A
      VarId v = intern(advance());
      advance();  // )
      FormulaPtr body = formula();
      return exists ? f_exists(v, std::move(body)) : f_forall(v, std::move(body));
    }
    // An atom and a parenthesized formula can both start with '('; try the
    // atom first and fall back on its failure.
    std::size_t save = pos_;
    try {
      return atom();
    } catch (const ParseError&) {
      if (toks_[save].kind != Tok::LParen) throw;
      pos_ = save;
    }
    expect(Tok::LParen, "'('");
    FormulaPtr f = formula();
    expect(Tok::RParen, "')'");
    return f;
  }

  FormulaPtr atom() {
    Poly lhs = term();
    Rel rel;
    switch (peek().kind) {
      case Tok::Eq: rel = Rel::Eq; break;
      case Tok::Ne: rel = Rel::Ne; break;
      case Tok::Lt: rel = Rel::Lt; break;
      case Tok::Le: rel = Rel::Le; break;
      case Tok::Gt: rel = Rel::Gt; break;
      case Tok::Ge: rel = Rel::Ge; break;
      default: fail("expected relation");
    }
    advance();
    Poly rhs = term();
    return f_atom(lhs - rhs, rel);
  }

  // term := addend { ("+"|"-") addend }
  Poly term() {
    Poly a = addend();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      bool plus = advance().kind == Tok::Plus;
      Poly b = addend();
      a = plus ? a + b : a - b;
    }
    return a;
  }

  // addend := factor { "*" factor }
  Poly addend() {
    Poly a = factor();
    while (peek().kind == Tok::Star) {
      advance();
      a = a * factor();
    }
    return a;
  }

  // factor := "-" factor | base [ "^" nat ]
  Poly factor() {
    if (peek().kind == Tok::Minus) {
      advance();
      return -factor();
    }
    Poly b = base();
    if (peek().kind == Tok::Caret) {
      advance();
      if (peek().kind != Tok::Int) fail("expected integer exponent");
      const Token& e = advance();
      unsigned long exp;
      try {
        exp = std::stoul(e.text);
      } catch (const std::exception&) {
        throw ParseError("exponent too large", e.line, e.col);
      }
      if (exp > 100000) throw ParseError("exponent too large", e.line, e.col);
      return b.pow(static_cast<unsigned>(exp));
    }
    return b;
  }

  // base := rational | ident | "(" term ")"
  Poly base() {
    if (peek().kind == Tok::Int) {
      const Token& num = advance();
      if (peek().kind == Tok::Slash) {
        advance();
        if (peek().kind != Tok::Int) fail("expected denominator");
        const Token& den = advance();
        if (den.text.find_first_not_of('0') == std::string::npos)
          throw ParseError("zero denominator", den.line, den.col);
        return Poly(parse_rational(num.text + "/" + den.text));
      }
      return Poly(parse_rational(num.text));
    }
    if (peek().kind == Tok::Ident) return Poly::var(intern(advance()));
    if (peek().kind == Tok::LParen) {
      advance();
      Poly t = term();
      expect(Tok::RParen, "')'");
      return t;
    }
    fail("expected term");
  }

  VarId intern(const Token& name) {
    if (allow_new_) return table_.intern(name.text);
    if (!table_.contains(name.text))
      throw ParseError("unknown identifier '" + name.text + "'", name.line, name.col);
    return table_.id_of(name.text);
  }
};

// Binding strength of a node for parenthesization; larger binds tighter.
int level(const FormulaPtr& f) {
  switch (f->kind()) {
    case FKind::True:
    case FKind::False:
    case FKind::Atom: return 5;
    case FKind::Not: return 4;
    case FKind::And: return 3;
    case FKind::Or: return 2;
    case FKind::Implies:
    case FKind::Exists:
    case FKind::Forall: return 1;
  }
  throw std::logic_error("bad FKind");
}

void print_rec(const FormulaPtr& f, const VarTable& table, int need, std::string& out) {
  bool parens = level(f) < need;
  if (parens) out += "(";
  switch (f->kind()) {
    case FKind::True: out += "true"; break;
    case FKind::False: out += "false"; break;
    case FKind::Atom:
      out += f->lhs().to_string(table);
      out += " ";
      out += rel_symbol(f->rel());
      out += " 0";
      break;
    case FKind::Not:
      out += "~";
      print_rec(f->child(), table, 4, out);
      break;
    case FKind::And:
      print_rec(f->left(), table, 3, out);
      out += " /\\ ";
      print_rec(f->right(), table, 4, out);
      break;
    case FKind::Or:
      print_rec(f->left(), table, 2, out);
      out += " \\/ ";
      print_rec(f->right(), table, 3, out);
      break;
    case FKind::Implies:
      print_rec(f->left(), table, 2, out);
      out += " -> ";
      print_rec(f->right(), table, 1, out);
      break;
    case FKind::Exists:
    case FKind::Forall:
      out += f->kind() == FKind::Exists ? "(E " : "(A ";
      out += table.name_of(f->var());
      out += ") ";
      print_rec(f->child(), table, 1, out);
      break;
  }
  if (parens) out += ")";
}

}  // namespace

FormulaPtr parse_formula(const std::string& text, VarTable& table, bool allow_new_vars) {
  Parser p(lex(text), table, allow_new_vars);
  return p.formula_then_end();
}

Poly parse_term(const std::string& text, VarTable& table, bool allow_new_vars) {
  Parser p(lex(text), table, allow_new_vars);
  return p.term_then_end();
}

std::string print_formula(const FormulaPtr& f, const VarTable& table) {
  std::string out;
  print_rec(f, table, 1, out);
  return out;
}

}  // namespace mubqe
