// Bridge to the Wolfram language: formulas render into the fragment built
// from True/False, polynomial relations, !, &&, ||, Implies[a, b] and
// Exists/ForAll with variable lists, and answers written in that same
// fragment parse back. This is the exchange format for cross-checking
// against an external quantifier-elimination backend.
#ifndef MUBQE_WOLFRAM_HPP
#define MUBQE_WOLFRAM_HPP

#include <map>
#include <string>

#include "mubqe/formula.hpp"
#include "mubqe/mubgen.hpp"

namespace mubqe {

// Deterministic rendering of f. Atoms move their constant term to the right
// side (x^2 - 2 > 0 becomes x^2 > 2). A variable listed in inline_radicals
// with value d renders as the constant Sqrt[1/d] instead of its name;
// quantifiers drop such variables from their lists (and vanish when the
// list empties), since a constant cannot be bound.
std::string to_wolfram(const FormulaPtr& f, const VarTable& names,
                       const std::map<VarId, unsigned>& inline_radicals = {});

std::string poly_to_wolfram(const Poly& p, const VarTable& names,
                            const std::map<VarId, unsigned>& inline_radicals = {});

// One equation of a generated system. When the system carries component
// expressions and either inline_radicals is set or the radical is a genuine
// system variable, cross-vector conditions display as
// (Re)^2 + (Im)^2 == rhs with the inner product left unexpanded; otherwise
// the stored polynomial is rendered directly.
std::string equation_to_wolfram(const MubSystem& sys, const MubEquation& eq,
                                bool inline_radicals);

// Parses the fragment back. Sqrt and any construct outside the fragment are
// rejected with std::invalid_argument; new identifiers are interned into
// `table`. Round trip: for formulas without inlined radicals,
// from_wolfram(to_wolfram(f)) is equal to f up to atom normalization.
FormulaPtr from_wolfram(const std::string& text, VarTable& table);

}  // namespace mubqe

#endif
