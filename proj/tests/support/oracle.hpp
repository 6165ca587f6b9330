#pragma once

// Independent truth-table oracle for propositional formulas (variables of
// type B, bot, imp). Deliberately avoids the library's Value/eval path so
// semantic claims are cross-checked by a second route.

#include <map>
#include <set>
#include <stdexcept>

#include "ptt/term.hpp"

namespace ptt_test {

using namespace ptt;

inline bool prop_eval(const Term& t, const std::map<VarName, bool>& v) {
  if (t == Term::bot()) return false;
  if (t.kind() == TermKind::FreeVar) {
    auto it = v.find(t.var_name());
    if (it == v.end()) throw std::runtime_error("oracle: unbound variable");
    return it->second;
  }
  if (t.is_imp_app())
    return !prop_eval(t.imp_lhs(), v) || prop_eval(t.imp_rhs(), v);
  throw std::runtime_error("oracle: not a propositional formula");
}

inline bool prop_valid(const Term& t) {
  std::set<VarName> fv = free_vars(t);
  std::vector<VarName> vars(fv.begin(), fv.end());
  const size_t n = vars.size();
  if (n > 20) throw std::runtime_error("oracle: too many variables");
  for (std::uint64_t bits = 0; bits < (1ull << n); ++bits) {
    std::map<VarName, bool> v;
    for (size_t i = 0; i < n; ++i) v[vars[i]] = (bits >> i) & 1;
    if (!prop_eval(t, v)) return false;
  }
  return true;
}

}  // namespace ptt_test
