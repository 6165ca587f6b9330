#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ptt/proofsys.hpp"
#include "ptt/semantics.hpp"
#include "ptt/term.hpp"

namespace ptt {

/// The preamble of a source unit: free identifiers declared with
/// `var f : B->B.`, each exactly once.
struct Declarations {
  std::vector<VarName> vars;  // declaration order

  std::optional<VarName> lookup(const std::string& id) const;
};

/// A parsed `.ptt` or `.pttp` file: the preamble plus one term, sequent, or
/// derivation.
struct ParsedUnit {
  Declarations decls;
  std::variant<Term, Sequent, DerivPtr> body;

  bool is_term() const { return std::holds_alternative<Term>(body); }
  bool is_sequent() const { return std::holds_alternative<Sequent>(body); }
  bool is_derivation() const { return std::holds_alternative<DerivPtr>(body); }
  const Term& term() const { return std::get<Term>(body); }
  const Sequent& sequent() const { return std::get<Sequent>(body); }
  const DerivPtr& derivation() const { return std::get<DerivPtr>(body); }
};

/// Type expressions: `B`, `T -> T` (right-associative), parentheses.
TypeExpr parse_type(const std::string& text);

/// Parses a whole unit, auto-detecting the body category.
ParsedUnit parse_unit(const std::string& text);

/// Category-specific entry points; throw ParseError if the body is of a
/// different category.
Term parse_term_file(const std::string& text);
Sequent parse_sequent_file(const std::string& text);
DerivPtr parse_derivation_file(const std::string& text);

/// Value literals: `0`, `1`, or `[v,...,v]` with entries in canonical
/// domain order.
Value parse_value(const std::string& text, const TypeExpr& type,
                  std::uint64_t guard = kDefaultGuard);

}  // namespace ptt
