#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ptt/errors.hpp"
#include "ptt/type.hpp"

namespace ptt {

/// A typed variable name. The identifiers "bot" and "imp" denote the two
/// constants and are not variable names; a handful of further keywords are
/// reserved by the concrete syntax.
struct VarName {
  std::string id;
  TypeExpr type;

  VarName(std::string id_, TypeExpr type_);

  bool operator==(const VarName& o) const {
    return id == o.id && type == o.type;
  }
  bool operator!=(const VarName& o) const { return !(*this == o); }
  bool operator<(const VarName& o) const {
    if (id != o.id) return id < o.id;
    return TypeExpr::compare(type, o.type) < 0;
  }
};

bool is_reserved_word(const std::string& id);

enum class TermKind : std::uint8_t { FreeVar, BoundVar, Bot, Imp, Lam, App };

/// A well-typed lambda term over the constants bot : B and imp : B->B->B.
///
/// Bound variables are de Bruijn indices, so alpha-equivalent terms are
/// structurally equal and operator== decides alpha-equivalence. Free
/// variables carry names and types. All public factories type-check and
/// every constructed Term is well-typed and locally closed.
class Term {
 public:
  // -- factories ------------------------------------------------------
  static Term var(const VarName& name);
  static Term bot();
  static Term imp_const();
  /// Abstraction: closes free occurrences of `binder` in `body`.
  static Term lam(const VarName& binder, const Term& body);
  /// Application; throws TypeError unless fun : A->B and arg : A.
  static Term app(const Term& fun, const Term& arg);
  /// Implication a => b as a term, i.e. app(app(imp, a), b).
  static Term imp(const Term& a, const Term& b);

  // -- observers ------------------------------------------------------
  TermKind kind() const;
  const TypeExpr& type() const;
  const VarName& var_name() const;     // FreeVar
  int bound_index() const;             // BoundVar
  TypeExpr binder_type() const;        // Lam
  Term body() const;                   // Lam: raw de Bruijn body
  Term open_body(const VarName& x) const;  // Lam: body with binder named x
  Term fun() const;                    // App
  Term arg() const;                    // App
  std::uint32_t node_count() const;

  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }
  /// Deterministic total order (independent of hashes and addresses).
  static int compare(const Term& a, const Term& b);
  std::uint64_t hash() const;

  // -- pattern helpers ------------------------------------------------
  bool is_imp_app() const;  // app(app(imp, a), b)
  Term imp_lhs() const;
  Term imp_rhs() const;

  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  const Node* raw() const { return node_.get(); }
  const std::shared_ptr<const Node>& ptr() const { return node_; }

 private:
  std::shared_ptr<const Node> node_;
};

/// type_of(s): the unique type of s. Total on constructed Terms; kept as a
/// named operation to match the kernel surface.
inline TypeExpr type_of(const Term& s) { return s.type(); }

std::set<VarName> free_vars(const Term& s);
bool is_closed(const Term& s);

/// Capture-free substitution of t for the free variable x in s.
/// Throws TypeError unless t's type equals x's declared type.
Term substitute(const Term& s, const VarName& x, const Term& t);

/// Simultaneous capture-free substitution.
Term substitute_many(const Term& s,
                     const std::vector<std::pair<VarName, Term>>& subs);

/// The beta-normal form of s (exists and is unique: simply typed).
Term beta_normalize(const Term& s);
bool is_beta_normal(const Term& s);

/// Beta-normal form followed by full eta contraction; canonical
/// representative of the lambda-equivalence class.
Term canonical_form(const Term& s);

/// Decides lambda equivalence (least congruence containing alpha, beta,
/// eta) by comparing canonical forms. Throws TypeError on type mismatch.
bool lambda_equiv(const Term& s, const Term& t);

/// Every identifier occurring in s, free or bound or shadowed; used to
/// pick fresh names.
void collect_idents(const Term& s, std::set<std::string>& out);

/// A fresh variable whose identifier has the given stem and is not in
/// `avoid`: the bare stem if available, otherwise stem + smallest numeric
/// suffix strictly larger than any suffix of the stem present in avoid.
VarName fresh_var(const std::string& stem, const TypeExpr& type,
                  const std::set<std::string>& avoid);

// -- contexts ---------------------------------------------------------

/// One step of a context path, from the root towards the hole.
struct ContextStep {
  enum class Kind : std::uint8_t { UnderLam, IntoFun, IntoArg };
  Kind kind;
  std::optional<VarName> binder;  // UnderLam
  std::optional<Term> sibling;    // IntoFun: the argument; IntoArg: the function

  static ContextStep under_lam(const VarName& binder);
  static ContextStep into_fun(const Term& sibling_arg);
  static ContextStep into_arg(const Term& sibling_fun);

  bool operator==(const ContextStep& o) const;
  bool operator!=(const ContextStep& o) const { return !(*this == o); }
};

/// A context C ::= [] | \x.C | C s | s C as a path of steps. Sibling and
/// plugged terms are in named (opened) form relative to the binders that
/// precede them on the path.
using ContextPath = std::vector<ContextStep>;

/// C[s]: plugging is deliberately capturing — free occurrences in s of a
/// binder on the path become bound. Throws TypeError if the result is
/// ill-typed.
Term plug(const ContextPath& path, const Term& s);

std::set<VarName> binders_on_path(const ContextPath& path);

/// True iff no binder on the path is free in any of the formulas.
bool admissible(const ContextPath& path, const std::vector<Term>& formulas);

// -- internal open/close helpers (used by printer, parser, prover) ----
namespace detail {
/// Replaces loose bound indices with the given names; names[0] is the
/// outermost binder.
Term open_multi(const Term& t, const std::vector<VarName>& names);
/// Inverse of open_multi: abstracts free occurrences of the names.
Term close_multi(const Term& t, const std::vector<VarName>& names);
}  // namespace detail

}  // namespace ptt
