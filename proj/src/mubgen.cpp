// System generation for "k mutually unbiased bases in dimension d": variable
// layout, the MUB equations over paired real variables, symmetry reductions,
// relaxed variants, the cost-model estimate, and plain-text serialization.
#include "mubqe/mubgen.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace mubqe {

const char* eq_kind_name(EqKind k) {
  switch (k) {
    case EqKind::Normalization: return "normalization";
    case EqKind::Orthogonality: return "orthogonality";
    case EqKind::Unbiasedness: return "unbiasedness";
  }
  throw std::logic_error("bad EqKind");
}

EqKind eq_kind_from_name(const std::string& name) {
  if (name == "normalization") return EqKind::Normalization;
  if (name == "orthogonality") return EqKind::Orthogonality;
  if (name == "unbiasedness") return EqKind::Unbiasedness;
  throw std::invalid_argument("unknown equation kind: " + name);
}

std::size_t MubSystem::trivial_equation_count() const {
  std::size_t n = 0;
  for (const auto& eq : equations)
    if (eq.lhs.is_zero()) ++n;
  return n;
}

const ComplexExpr& MubSystem::component(unsigned m, unsigned i, unsigned j) const {
  if (!has_components())
    throw std::logic_error("component table unavailable (relaxed serialization)");
  if (m >= k() || i >= d() || j >= d())
    throw std::out_of_range("component index out of range");
  return components[(static_cast<std::size_t>(m) * d() + i) * d() + j];
}

namespace {

// Owner sentinel for variables not tied to a ket (the sqrt variable).
constexpr unsigned kNoBasis = 0xffffffffu;

std::string coord_name(unsigned k, unsigned m, unsigned i, unsigned j, unsigned part) {
  std::string base;
  if (k <= 4) {
    base = std::string(1, "xyzw"[m]);
    base += std::to_string(i);
    base += std::to_string(j);
  } else {
    base = "b" + std::to_string(m + 1) + "v" + std::to_string(i) + "c" + std::to_string(j);
  }
  return base + std::to_string(part);
}

// Replaces even powers of the sqrt variable by powers of 1/d; an odd power
// means the polynomial is not rational in the remaining variables.
std::optional<Poly> drop_even_sqrt(const Poly& p, VarId r, const Rational& inv_d) {
  Poly out;
  for (const auto& [mono, c] : p.terms()) {
    auto [rest, e] = mono.without(r);
    if (e % 2 != 0) return std::nullopt;
    out.add_term(rest, c * rational_pow(inv_d, e / 2));
  }
  return out;
}

std::vector<ComplexExpr> ket(const MubSystem& sys, unsigned m, unsigned i) {
  std::vector<ComplexExpr> v;
  for (unsigned j = 0; j < sys.d(); ++j) v.push_back(sys.component(m, i, j));
  return v;
}

void build_components(MubSystem& sys) {
  const auto& cfg = sys.instance.reductions;
  const unsigned k = sys.k(), d = sys.d();
  if (cfg.fix_first_components)
    sys.sqrt_id = sys.names.intern("r" + std::to_string(d));
  sys.components.resize(static_cast<std::size_t>(k) * d * d);

  for (unsigned m = 0; m < k; ++m) {
    bool canonical = cfg.fix_first_basis_canonical && m == 0;
    for (unsigned i = 0; i < d; ++i) {
      for (unsigned j = 0; j < d; ++j) {
        ComplexExpr e;
        if (canonical) {
          e = ComplexExpr::constant(Rational(i == j ? 1 : 0));
        } else {
          Poly re, im;
          if (j == 0 && cfg.fix_first_components) {
            re = Poly::var(*sys.sqrt_id);
          } else {
            VarId v = sys.names.intern(coord_name(k, m, i, j, 0));
            sys.free_vars.push_back(v);
            sys.free_var_owner.push_back({m, i});
            re = Poly::var(v);
          }
          if (j == 0 && cfg.fix_phases) {
            im = Poly();
          } else {
            VarId v = sys.names.intern(coord_name(k, m, i, j, 1));
            sys.free_vars.push_back(v);
            sys.free_var_owner.push_back({m, i});
            im = Poly::var(v);
          }
          e = ComplexExpr::make(std::move(re), std::move(im));
        }
        sys.components[(static_cast<std::size_t>(m) * d + i) * d + j] = e;
      }
    }
  }
}

Poly normalization_lhs(const std::vector<ComplexExpr>& v) {
  Poly s;
  for (const auto& c : v) s += c.mod_squared();
  return s - Poly(Rational(1));
}

void build_equations(MubSystem& sys) {
  const unsigned k = sys.k(), d = sys.d();
  const Rational inv_d(1, static_cast<long>(d));
  std::size_t id = 0;

  for (unsigned m = 0; m < k; ++m)
    for (unsigned i = 0; i < d; ++i)
      sys.equations.push_back(
          {id++, EqKind::Normalization, m, i, m, i, normalization_lhs(ket(sys, m, i))});

  const unsigned total = k * d;
  for (unsigned g1 = 0; g1 < total; ++g1) {
    for (unsigned g2 = g1 + 1; g2 < total; ++g2) {
      unsigned m1 = g1 / d, i1 = g1 % d, m2 = g2 / d, i2 = g2 % d;
      ComplexExpr ip = inner_product(ket(sys, m1, i1), ket(sys, m2, i2));
      Poly lhs = ip.mod_squared();
      EqKind kind;
      if (m1 == m2) {
        kind = EqKind::Orthogonality;
      } else {
        kind = EqKind::Unbiasedness;
        lhs -= Poly(inv_d);
      }
      sys.equations.push_back({id++, kind, m1, i1, m2, i2, std::move(lhs)});
    }
  }
}

void attach_sqrt_conditions(MubSystem& sys) {
  VarId r = *sys.sqrt_id;
  sys.sqrt_symbolic = true;
  sys.free_vars.push_back(r);
  sys.free_var_owner.push_back({kNoBasis, 0});
  Poly def = Poly::var(r, 2).scaled(Rational(static_cast<long>(sys.d()))) - Poly(Rational(1));
  sys.side_conditions.push_back(f_atom(def, Rel::Eq));
  sys.side_conditions.push_back(f_atom(Poly::var(r), Rel::Gt));
}

void finalize_sqrt(MubSystem& sys) {
  if (!sys.sqrt_id) return;
  VarId r = *sys.sqrt_id;
  bool used = false;
  for (const auto& eq : sys.equations)
    if (eq.lhs.mentions(r)) { used = true; break; }
  if (!used) return;

  const Rational inv_d(1, static_cast<long>(sys.d()));
  if (!sys.instance.reductions.use_symbolic_sqrt) {
    std::vector<Poly> reduced;
    reduced.reserve(sys.equations.size());
    bool ok = true;
    for (const auto& eq : sys.equations) {
      auto q = drop_even_sqrt(eq.lhs, r, inv_d);
      if (!q) { ok = false; break; }
      reduced.push_back(std::move(*q));
    }
    if (ok) {
      for (std::size_t n = 0; n < reduced.size(); ++n)
        sys.equations[n].lhs = std::move(reduced[n]);
      return;
    }
    // an odd power survived; fall back to the constrained variable
  }
  attach_sqrt_conditions(sys);
}

void prune_trivial(MubSystem& sys) {
  if (!sys.instance.reductions.prune_trivial_equations) return;
  std::vector<MubEquation> kept;
  for (auto& eq : sys.equations)
    if (!eq.lhs.is_zero()) kept.push_back(std::move(eq));
  sys.equations = std::move(kept);
}

void validate(const MubInstance& inst) {
  if (inst.k < 1 || inst.d < 1)
    throw std::invalid_argument("k and d must be positive");
  const auto& cfg = inst.reductions;
  if (cfg.fix_first_components && !(cfg.fix_phases && cfg.fix_first_basis_canonical))
    throw std::invalid_argument(
        "fix_first_components requires fix_phases and fix_first_basis_canonical");
}

}  // namespace

MubSystem generate_system(const MubInstance& inst) {
  validate(inst);
  MubSystem sys;
  sys.instance = inst;
  build_components(sys);
  build_equations(sys);
  finalize_sqrt(sys);
  prune_trivial(sys);
  return sys;
}

FormulaPtr to_sentence(const MubSystem& sys) {
  std::vector<FormulaPtr> parts;
  for (const auto& eq : sys.equations) parts.push_back(f_atom(eq.lhs, Rel::Eq));
  for (const auto& c : sys.side_conditions) parts.push_back(c);
  FormulaPtr body = f_and_all(parts);
  for (auto it = sys.free_vars.rbegin(); it != sys.free_vars.rend(); ++it)
    body = f_exists(*it, std::move(body));
  return body;
}

MubSystem generate_relaxed(const MubSystem& sys, const RelaxSpec& spec) {
  const unsigned k = sys.k(), d = sys.d();
  std::vector<unsigned> counts(k, d);
  if (!spec.truncate_bases.empty()) {
    if (spec.truncate_bases.size() != k)
      throw std::invalid_argument("truncate_bases must list one count per basis");
    for (unsigned m = 0; m < k; ++m) {
      if (spec.truncate_bases[m] > d)
        throw std::invalid_argument("cannot truncate a basis to more than d vectors");
      counts[m] = spec.truncate_bases[m];
    }
    if (sys.free_var_owner.size() != sys.free_vars.size())
      throw std::logic_error("cannot truncate a system without ownership data");
  }
  auto survives = [&](unsigned basis, unsigned vec) {
    if (basis >= k) return true;  // sqrt variable or adjoined vector
    return vec < counts[basis];
  };

  MubSystem out = sys;
  out.relaxed = true;

  if (!spec.truncate_bases.empty()) {
    std::vector<MubEquation> kept;
    for (const auto& eq : out.equations)
      if (survives(eq.basis_a, eq.vec_a) && survives(eq.basis_b, eq.vec_b))
        kept.push_back(eq);
    out.equations = std::move(kept);
    std::vector<VarId> fv;
    std::vector<std::pair<unsigned, unsigned>> own;
    for (std::size_t n = 0; n < out.free_vars.size(); ++n) {
      if (survives(out.free_var_owner[n].first, out.free_var_owner[n].second)) {
        fv.push_back(out.free_vars[n]);
        own.push_back(out.free_var_owner[n]);
      }
    }
    out.free_vars = std::move(fv);
    out.free_var_owner = std::move(own);
  }

  if (!spec.drop_equation_ids.empty()) {
    std::set<std::size_t> known;
    for (const auto& eq : sys.equations) known.insert(eq.id);
    std::set<std::size_t> drop;
    for (std::size_t id : spec.drop_equation_ids) {
      if (!known.count(id))
        throw std::invalid_argument("unknown equation id " + std::to_string(id));
      drop.insert(id);
    }
    std::vector<MubEquation> kept;
    for (auto& eq : out.equations)
      if (!drop.count(eq.id)) kept.push_back(std::move(eq));
    out.equations = std::move(kept);
  }

  if (spec.add_unbiased_vector) {
    if (!sys.has_components())
      throw std::logic_error("cannot extend a system without its component table");
    const Rational inv_d(1, static_cast<long>(d));
    for (unsigned j = 0; j < d; ++j) {
      VarId re = out.names.fresh("v" + std::to_string(j) + "0");
      VarId im = out.names.fresh("v" + std::to_string(j) + "1");
      out.free_vars.push_back(re);
      out.free_var_owner.push_back({k, 0});
      out.free_vars.push_back(im);
      out.free_var_owner.push_back({k, 0});
      out.extra_vector.push_back(ComplexExpr::make(Poly::var(re), Poly::var(im)));
    }
    std::size_t next = 0;
    for (const auto& eq : out.equations) next = std::max(next, eq.id + 1);
    for (const auto& eq : sys.equations) next = std::max(next, eq.id + 1);

    out.equations.push_back({next++, EqKind::Normalization, k, 0, k, 0,
                             normalization_lhs(out.extra_vector)});
    for (unsigned m = 0; m < k; ++m) {
      for (unsigned i = 0; i < counts[m]; ++i) {
        ComplexExpr ip = inner_product(out.extra_vector, ket(sys, m, i));
        out.equations.push_back(
            {next++, EqKind::Unbiasedness, k, 0, m, i, ip.mod_squared() - Poly(inv_d)});
      }
    }
  }

  return out;
}

double estimate_renegar(const RenegarParams& p) {
  if (p.L < 4) throw std::invalid_argument("L must be at least 4");
  if (p.m == 0 || p.deg == 0) throw std::invalid_argument("m and deg must be positive");
  double log2L = std::log2(static_cast<double>(p.L));
  double base = std::log10(static_cast<double>(p.L)) + std::log10(log2L) +
                std::log10(std::log2(log2L));
  return base + static_cast<double>(p.n) *
                    std::log10(static_cast<double>(p.m) * static_cast<double>(p.deg));
}

std::string serialize_mub_system(const MubSystem& sys) {
  const auto& cfg = sys.instance.reductions;
  std::ostringstream os;
  os << "mubsystem 1\n";
  os << "k " << sys.k() << "\n";
  os << "d " << sys.d() << "\n";
  os << "flags fix_first_basis_canonical=" << cfg.fix_first_basis_canonical
     << " fix_phases=" << cfg.fix_phases
     << " fix_first_components=" << cfg.fix_first_components
     << " prune_trivial_equations=" << cfg.prune_trivial_equations
     << " use_symbolic_sqrt=" << cfg.use_symbolic_sqrt << "\n";
  os << "relaxed " << sys.relaxed << "\n";
  os << "sqrt_symbolic " << sys.sqrt_symbolic << "\n";
  os << "names " << sys.names.size() << "\n";
  for (std::size_t n = 0; n < sys.names.size(); ++n) {
    if (n) os << " ";
    os << sys.names.name_of(VarId{static_cast<std::uint32_t>(n)});
  }
  os << "\n";
  os << "free " << sys.free_vars.size() << "\n";
  for (std::size_t n = 0; n < sys.free_vars.size(); ++n) {
    if (n) os << " ";
    os << sys.names.name_of(sys.free_vars[n]);
  }
  os << "\n";
  os << "equations " << sys.equations.size() << "\n";
  for (const auto& eq : sys.equations) {
    os << "eq " << eq.id << " " << eq_kind_name(eq.kind) << " " << eq.basis_a << " "
       << eq.vec_a << " " << eq.basis_b << " " << eq.vec_b << " : "
       << eq.lhs.to_string(sys.names) << " = 0\n";
  }
  return os.str();
}

namespace {

std::string expect_line(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("truncated system text");
  return line;
}

void expect_keyword(std::istringstream& ls, const char* kw) {
  std::string w;
  ls >> w;
  if (w != kw)
    throw std::invalid_argument(std::string("expected '") + kw + "', got '" + w + "'");
}

bool parse_flag(const std::string& tok, const char* name) {
  std::string prefix = std::string(name) + "=";
  if (tok.rfind(prefix, 0) != 0)
    throw std::invalid_argument("expected flag " + std::string(name) + ", got " + tok);
  return tok.substr(prefix.size()) == "1";
}

}  // namespace

MubSystem parse_mub_system(const std::string& text) {
  std::istringstream in(text);
  if (expect_line(in) != "mubsystem 1")
    throw std::invalid_argument("not a mubsystem serialization");

  MubInstance inst;
  {
    std::istringstream ls(expect_line(in));
    expect_keyword(ls, "k");
    ls >> inst.k;
  }
  {
    std::istringstream ls(expect_line(in));
    expect_keyword(ls, "d");
    ls >> inst.d;
  }
  {
    std::istringstream ls(expect_line(in));
    expect_keyword(ls, "flags");
    std::string tok;
    ls >> tok;
    inst.reductions.fix_first_basis_canonical = parse_flag(tok, "fix_first_basis_canonical");
    ls >> tok;
    inst.reductions.fix_phases = parse_flag(tok, "fix_phases");
    ls >> tok;
    inst.reductions.fix_first_components = parse_flag(tok, "fix_first_components");
    ls >> tok;
    inst.reductions.prune_trivial_equations = parse_flag(tok, "prune_trivial_equations");
    ls >> tok;
    inst.reductions.use_symbolic_sqrt = parse_flag(tok, "use_symbolic_sqrt");
  }
  bool relaxed, sqrt_symbolic;
  {
    std::istringstream ls(expect_line(in));
    expect_keyword(ls, "relaxed");
    ls >> relaxed;
  }
  {
    std::istringstream ls(expect_line(in));
    expect_keyword(ls, "sqrt_symbolic");
    ls >> sqrt_symbolic;
  }

  MubSystem sys;
  sys.instance = inst;
  sys.relaxed = relaxed;
  sys.sqrt_symbolic = sqrt_symbolic;

  std::size_t name_count;
  {
    std::istringstream ls(expect_line(in));
    expect_keyword(ls, "names");
    ls >> name_count;
  }
  {
    std::istringstream ls(expect_line(in));
    std::string name;
    std::size_t seen = 0;
    while (ls >> name) {
      sys.names.intern(name);
      ++seen;
    }
    if (seen != name_count) throw std::invalid_argument("name count mismatch");
  }
  if (inst.reductions.fix_first_components) {
    std::string rn = "r" + std::to_string(inst.d);
    if (sys.names.contains(rn)) sys.sqrt_id = sys.names.id_of(rn);
  }

  std::size_t free_count;
  {
    std::istringstream ls(expect_line(in));
    expect_keyword(ls, "free");
    ls >> free_count;
  }
  {
    std::istringstream ls(expect_line(in));
    std::string name;
    while (ls >> name) sys.free_vars.push_back(sys.names.id_of(name));
    if (sys.free_vars.size() != free_count)
      throw std::invalid_argument("free variable count mismatch");
  }

  std::size_t eq_count;
  {
    std::istringstream ls(expect_line(in));
    expect_keyword(ls, "equations");
    ls >> eq_count;
  }
  for (std::size_t n = 0; n < eq_count; ++n) {
    std::istringstream ls(expect_line(in));
    MubEquation eq;
    std::string kind, colon;
    expect_keyword(ls, "eq");
    ls >> eq.id >> kind >> eq.basis_a >> eq.vec_a >> eq.basis_b >> eq.vec_b >> colon;
    if (colon != ":") throw std::invalid_argument("malformed equation line");
    eq.kind = eq_kind_from_name(kind);
    std::string rest;
    std::getline(ls, rest);
    const std::string suffix = " = 0";
    if (rest.size() < suffix.size() ||
        rest.compare(rest.size() - suffix.size(), suffix.size(), suffix) != 0)
      throw std::invalid_argument("equation line must end with '= 0'");
    rest.resize(rest.size() - suffix.size());
    eq.lhs = parse_term(rest, sys.names, false);
    sys.equations.push_back(std::move(eq));
  }

  if (sys.sqrt_symbolic) {
    if (!sys.sqrt_id) throw std::invalid_argument("sqrt_symbolic without sqrt variable");
    Poly def = Poly::var(*sys.sqrt_id, 2).scaled(Rational(static_cast<long>(inst.d))) -
               Poly(Rational(1));
    sys.side_conditions.push_back(f_atom(def, Rel::Eq));
    sys.side_conditions.push_back(f_atom(Poly::var(*sys.sqrt_id), Rel::Gt));
  }

  if (!relaxed) {
    // regenerate the component table; the layout is deterministic, so the
    // names must line up with the serialized ones
    MubSystem regen = generate_system(inst);
    if (regen.names.size() != sys.names.size())
      throw std::invalid_argument("serialization inconsistent with its header");
    for (std::size_t n = 0; n < sys.names.size(); ++n) {
      VarId v{static_cast<std::uint32_t>(n)};
      if (regen.names.name_of(v) != sys.names.name_of(v))
        throw std::invalid_argument("serialization inconsistent with its header");
    }
    sys.components = std::move(regen.components);
    sys.free_var_owner = std::move(regen.free_var_owner);
  }
  return sys;
}

}  // namespace mubqe
