#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ptt/term.hpp"

namespace ptt {

/// A sequent A => s: a finite set of formulas plus a conclusion formula.
/// The assumption set is kept sorted and deduplicated under the canonical
/// term order, so sequent equality is structural.
class Sequent {
 public:
  Sequent(std::vector<Term> assumptions, Term conclusion);

  const std::vector<Term>& assumptions() const { return assumptions_; }
  const Term& conclusion() const { return conclusion_; }

  bool contains(const Term& s) const;
  /// This sequent with s added to the assumptions.
  Sequent with(const Term& s) const;
  /// This sequent with s removed from the assumptions (if present).
  Sequent without(const Term& s) const;
  /// Same assumptions, different conclusion.
  Sequent but(const Term& conclusion) const;

  bool operator==(const Sequent& o) const;
  bool operator!=(const Sequent& o) const { return !(*this == o); }
  bool same_assumptions(const Sequent& o) const;

 private:
  std::vector<Term> assumptions_;  // sorted, unique
  Term conclusion_;
};

enum class Rule : std::uint8_t { Triv, Weak, Ded, MP, DN, Lam, BR };

std::string rule_name(Rule r);

class Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

struct BrPayload {
  ContextPath context;
  Term lhs;
  Term rhs;
};

/// One node of a derivation tree in the seven-rule sequent calculus. Every
/// node stores its conclusion, so checking is local: a node is validated
/// from its own payload and its children's conclusions alone.
class Derivation {
 public:
  Rule rule() const { return rule_; }
  const Sequent& conclusion() const { return conclusion_; }
  const std::vector<DerivPtr>& premises() const { return premises_; }
  const std::optional<Term>& weak_added() const { return weak_added_; }
  const std::optional<Term>& ded_discharged() const { return ded_discharged_; }
  const std::optional<BrPayload>& br_payload() const { return br_; }

  // Smart constructors: compute the conclusion from the premises and throw
  // ShapeMismatchError when no rule instance fits. They do not replace
  // check(); that revalidates everything from scratch.

  /// A, s => s. The conclusion formula must be among the assumptions.
  static DerivPtr triv(const std::vector<Term>& assumptions, const Term& s);
  /// From A => t conclude A, s => t.
  static DerivPtr weak(const Term& s, const DerivPtr& d);
  /// From A, s => t conclude A => s -> t; s must be an assumption.
  static DerivPtr ded(const Term& s, const DerivPtr& d);
  /// From A => s -> t and A => s conclude A => t.
  static DerivPtr mp(const DerivPtr& d_imp, const DerivPtr& d_arg);
  /// From A => (s -> bot) -> bot conclude A => s.
  static DerivPtr dn(const DerivPtr& d);
  /// From A => s conclude A => t for lambda-equivalent t. The equivalence
  /// is not verified here; check() decides it.
  static DerivPtr lam_rule(const Term& target, const DerivPtr& d);
  /// From A => s === t (the literal expansion (s->t) /\ (t->s)) and
  /// A => C[s] conclude A => C[t], provided C is admissible for A.
  static DerivPtr br(const ContextPath& context, const Term& s, const Term& t,
                     const DerivPtr& d_eq, const DerivPtr& d_body);

  /// Unchecked node; used by the parser (which reconstructs conclusions
  /// leniently) and by tests that need to build broken derivations.
  static DerivPtr raw(Rule rule, Sequent conclusion,
                      std::vector<DerivPtr> premises,
                      std::optional<Term> weak_added = std::nullopt,
                      std::optional<Term> ded_discharged = std::nullopt,
                      std::optional<BrPayload> br = std::nullopt);

  bool operator==(const Derivation& o) const;
  bool operator!=(const Derivation& o) const { return !(*this == o); }

  std::size_t tree_size() const;

 private:
  Derivation(Rule rule, Sequent conclusion, std::vector<DerivPtr> premises)
      : rule_(rule),
        conclusion_(std::move(conclusion)),
        premises_(std::move(premises)) {}

  Rule rule_;
  Sequent conclusion_;
  std::vector<DerivPtr> premises_;
  std::optional<Term> weak_added_;
  std::optional<Term> ded_discharged_;
  std::optional<BrPayload> br_;
};

/// conclusion(d): the root sequent; carries no claim of checkedness.
inline const Sequent& conclusion(const Derivation& d) { return d.conclusion(); }

enum class CheckCode {
  ArityMismatch,
  NotInAssumptions,
  RuleMismatch,
  NotLambdaEquivalent,
  AdmissibilityViolation,
  IllTyped,
};

std::string check_code_name(CheckCode c);

/// Where and why a derivation fails: path[i] is the premise index taken at
/// depth i from the root.
struct CheckError {
  std::vector<int> path;
  CheckCode code;
  std::string message;

  std::string to_string() const;
};

/// Validates every node locally against its rule; nullopt means the
/// derivation checks.
std::optional<CheckError> check(const Derivation& d);

/// Shorthand: check(d) has no error.
bool checks(const Derivation& d);

}  // namespace ptt
