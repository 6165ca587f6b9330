#pragma once

#include <string>

#include "ptt/proofsys.hpp"
#include "ptt/semantics.hpp"
#include "ptt/term.hpp"

namespace ptt {

struct PrintOptions {
  /// When set, folds the definable connectives back into `top`, `~`, `\/`,
  /// `/\`, `<=>`, `==`, `forall` where the term matches their literal
  /// expansions. Off by default; either way parse(pretty(t)) == t.
  bool sugar = false;
};

std::string pretty(const TypeExpr& type);
std::string pretty(const Term& term, const PrintOptions& opts = {});
std::string pretty(const Sequent& sequent, const PrintOptions& opts = {});
std::string pretty(const Value& value);

/// The derivation as an s-expression (no preamble).
std::string pretty(const Derivation& d);

/// Whole files: preamble of declarations for every free identifier, then
/// the body. Deterministic, byte-stable output.
std::string render_term_file(const Term& t, const PrintOptions& opts = {});
std::string render_sequent_file(const Sequent& q,
                                const PrintOptions& opts = {});
std::string render_derivation_file(const Derivation& d);

}  // namespace ptt
