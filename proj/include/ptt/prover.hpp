#pragma once

#include <variant>
#include <vector>

#include "ptt/proofsys.hpp"
#include "ptt/quote.hpp"
#include "ptt/semantics.hpp"

namespace ptt {

/// Failure witness of taut_prove: a falsifying Boolean assignment of the
/// propositional skeleton's atoms.
struct NotTautologous {
  std::vector<std::pair<Term, bool>> atom_assignment;
};

/// Failure witness of prove/closed_prove: a falsifying assignment.
struct NotValid {
  Assignment countermodel;
};

using TautResult = std::variant<DerivPtr, NotTautologous>;
using ProveResult = std::variant<DerivPtr, NotValid>;

/// True iff s is generated by s ::= x | bot | s => s with x a variable of
/// type B.
bool is_propositional(const Term& s);

/// If s is a substitution instance of a valid propositional formula,
/// returns a derivation of |- s built from the propositional subsystem
/// alone (Triv, Weak, Ded, MP, DN): truth-table induction deriving each
/// leaf under its literal assumptions, then eliminating atoms through a
/// replayed case-split schema. Otherwise returns the falsifying skeleton
/// assignment.
TautResult taut_prove(const Term& s, std::uint64_t guard = kDefaultGuard);

/// From A, s1..sn => s and derivations of A => si, a derivation of A => s
/// (Ded and MP chains). With no side derivations returns d_main unchanged.
DerivPtr cut_derive(const DerivPtr& d_main, const std::vector<DerivPtr>& ds);

/// From A => s1 and A => s2, a derivation of A => s1 /\ s2.
DerivPtr and_intro(const DerivPtr& d1, const DerivPtr& d2,
                   std::uint64_t guard = kDefaultGuard);

/// A derivation of A => s === s.
DerivPtr ref_derive(const std::vector<Term>& assumptions, const Term& s,
                    std::uint64_t guard = kDefaultGuard);

/// From a derivation of A => s, a derivation of A[x:=t] => s[x:=t].
DerivPtr sub_derive(const DerivPtr& d, const VarName& x, const Term& t,
                    std::uint64_t guard = kDefaultGuard);

/// Deduces a closed valid formula: beta-normalize, prove the propositional
/// normal form, convert back. Throws NotClosedError on open input.
ProveResult closed_prove(const Term& s, std::uint64_t guard = kDefaultGuard);

/// The distribution equivalence over a matrix of distinct Boolean
/// variables: |- AND_i OR_j x(i,j) === OR_{phi in J^I} AND_i x(i, phi i),
/// with phi enumerated in table order (first row most significant).
DerivPtr distrib_derive(const std::vector<std::vector<VarName>>& matrix,
                        std::uint64_t guard = kDefaultGuard);

/// |- quote(tau, a b) ==_tau (quote(sigma->tau, a)) (quote(sigma, b)).
DerivPtr prop_rei_derive(const TypeExpr& sigma, const TypeExpr& tau,
                         const Value& a, const Value& b,
                         std::uint64_t guard = kDefaultGuard);

/// The enumeration disjunction for x : sigma.
Term enum_formula(const TypeExpr& sigma, const VarName& x,
                  std::uint64_t guard = kDefaultGuard);

/// |- OR_{a} (quote(sigma, a) ==_sigma x), by induction on sigma.
DerivPtr enum_derive(const TypeExpr& sigma, const VarName& x,
                     std::uint64_t guard = kDefaultGuard);

/// From A => s ==_sigma t and A => C[s], with C admissible for A and the
/// hole at type sigma, a derivation of A => C[t]. At base type a single BR
/// step; at arrow types the pointwise induction with a fresh variable.
DerivPtr rep_derive(const TypeExpr& sigma, const DerivPtr& d_eq,
                    const DerivPtr& d_body, const ContextPath& context,
                    std::uint64_t guard = kDefaultGuard);

/// The instantiation sequent { forall_sigma f } => f x.
DerivPtr all_derive(const TypeExpr& sigma, const VarName& f, const VarName& x,
                    std::uint64_t guard = kDefaultGuard);

/// Certifying completeness: for a valid formula returns a derivation of
/// |- s (re-checked before returning); otherwise a countermodel.
ProveResult prove(const Term& s, std::uint64_t guard = kDefaultGuard);

}  // namespace ptt
