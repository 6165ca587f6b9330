#pragma once

#include <vector>

#include "ptt/semantics.hpp"
#include "ptt/term.hpp"

namespace ptt {

// The definable connectives, expanded literally over bot and imp:
//   top      = bot => bot
//   neg s    = s => bot
//   disj s t = (s => t) => t
//   conj s t = neg (disj (neg s) (neg t))
//   equiv s t = conj (s => t) (t => s)
Term top_term();
Term neg(const Term& s);
Term disj(const Term& s, const Term& t);
Term conj(const Term& s, const Term& t);
Term equiv(const Term& s, const Term& t);

/// Empty disjunction is bot, empty conjunction is top, a singleton is the
/// element itself, otherwise a right-nested fold in sequence order.
Term big_or(const std::vector<Term>& formulas);
Term big_and(const std::vector<Term>& formulas);

/// The closed term denoting a: bits map to bot/top; a function value of
/// type s1 -> ... -> sn -> B maps to
///   \x1...\xn. OR over argument tuples sent to 1 of
///              AND over j of (xj == quote(sj, bj))
/// with disjuncts and conjuncts in canonical enumeration order.
Term quote(const TypeExpr& type, const Value& a,
           std::uint64_t guard = kDefaultGuard);

/// The closed term of type (s->B)->B denoting the universal quantifier
/// over s: \f. AND over a of f (quote(s, a)).
Term forall_term(const TypeExpr& type, std::uint64_t guard = kDefaultGuard);

/// The closed term of type s->s->B denoting the identity predicate on the
/// denotation of s.
Term eq_term(const TypeExpr& type, std::uint64_t guard = kDefaultGuard);

/// Convenience: the formula s == t, i.e. eq_term applied twice.
Term eq_formula(const Term& s, const Term& t,
                std::uint64_t guard = kDefaultGuard);

/// Convenience: the formula "forall x. s" as forall_term applied to \x.s.
Term forall_formula(const VarName& x, const Term& body,
                    std::uint64_t guard = kDefaultGuard);

}  // namespace ptt
