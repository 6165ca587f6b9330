#include "ptt/quote.hpp"

namespace ptt {

namespace {

Term require_formula(const Term& s) {
  if (!s.type().is_base())
    throw TypeError("connective argument must be a formula, got " +
                    s.type().to_string());
  return s;
}

}  // namespace

Term top_term() { return Term::imp(Term::bot(), Term::bot()); }

Term neg(const Term& s) { return Term::imp(require_formula(s), Term::bot()); }

Term disj(const Term& s, const Term& t) {
  require_formula(s);
  require_formula(t);
  return Term::imp(Term::imp(s, t), t);
}

Term conj(const Term& s, const Term& t) {
  return neg(disj(neg(s), neg(t)));
}

Term equiv(const Term& s, const Term& t) {
  return conj(Term::imp(require_formula(s), require_formula(t)),
              Term::imp(t, s));
}

Term big_or(const std::vector<Term>& formulas) {
  if (formulas.empty()) return Term::bot();
  Term acc = require_formula(formulas.back());
  for (size_t i = formulas.size() - 1; i-- > 0;)
    acc = disj(formulas[i], acc);
  return acc;
}

Term big_and(const std::vector<Term>& formulas) {
  if (formulas.empty()) return top_term();
  Term acc = require_formula(formulas.back());
  for (size_t i = formulas.size() - 1; i-- > 0;)
    acc = conj(formulas[i], acc);
  return acc;
}

Term quote(const TypeExpr& type, const Value& a, std::uint64_t guard) {
  if (a.type() != type)
    throw TypeError("quote: value of type " + a.type().to_string() +
                    " does not inhabit " + type.to_string());
  if (type.is_base()) return a.bit_value() ? top_term() : Term::bot();

  // Maximal uncurrying: type = s1 -> ... -> sn -> B.
  std::vector<TypeExpr> domains = type.uncurry();
  const size_t n = domains.size();
  std::vector<std::vector<Value>> dom_values;
  dom_values.reserve(n);
  for (const auto& d : domains) dom_values.push_back(enum_values(d, guard));

  std::vector<VarName> params;
  params.reserve(n);
  for (size_t j = 0; j < n; ++j)
    params.push_back(VarName("x" + std::to_string(j + 1), domains[j]));

  // Odometer over argument tuples, last coordinate fastest: tuple order is
  // lexicographic with the first argument most significant.
  std::vector<size_t> idx(n, 0);
  std::vector<Term> disjuncts;
  while (true) {
    Value result = a;
    for (size_t j = 0; j < n; ++j)
      result = apply_value(result, dom_values[j][idx[j]]);
    if (result.bit_value() == 1) {
      std::vector<Term> conjuncts;
      conjuncts.reserve(n);
      for (size_t j = 0; j < n; ++j)
        conjuncts.push_back(eq_formula(Term::var(params[j]),
                                       quote(domains[j], dom_values[j][idx[j]], guard),
                                       guard));
      disjuncts.push_back(big_and(conjuncts));
    }
    size_t j = n;
    bool done = true;
    while (j > 0) {
      --j;
      if (++idx[j] < dom_values[j].size()) {
        done = false;
        break;
      }
      idx[j] = 0;
    }
    if (done) break;
  }

  Term body = big_or(disjuncts);
  for (size_t j = n; j-- > 0;) body = Term::lam(params[j], body);
  return body;
}

Term forall_term(const TypeExpr& type, std::uint64_t guard) {
  VarName f("f", TypeExpr::arrow(type, TypeExpr::base()));
  std::vector<Term> conjuncts;
  for (const auto& a : enum_values(type, guard))
    conjuncts.push_back(Term::app(Term::var(f), quote(type, a, guard)));
  return Term::lam(f, big_and(conjuncts));
}

Term eq_term(const TypeExpr& type, std::uint64_t guard) {
  if (type.is_base()) {
    VarName x("x", type), y("y", type);
    return Term::lam(x, Term::lam(y, equiv(Term::var(x), Term::var(y))));
  }
  VarName f("f", type), g("g", type);
  VarName x("x", type.domain());
  Term pointwise = eq_formula(Term::app(Term::var(f), Term::var(x)),
                              Term::app(Term::var(g), Term::var(x)), guard);
  Term body = Term::app(forall_term(type.domain(), guard), Term::lam(x, pointwise));
  return Term::lam(f, Term::lam(g, body));
}

Term eq_formula(const Term& s, const Term& t, std::uint64_t guard) {
  if (s.type() != t.type())
    throw TypeError("== requires equal types, got " + s.type().to_string() +
                    " and " + t.type().to_string());
  return Term::app(Term::app(eq_term(s.type(), guard), s), t);
}

Term forall_formula(const VarName& x, const Term& body, std::uint64_t guard) {
  require_formula(body);
  return Term::app(forall_term(x.type, guard), Term::lam(x, body));
}

}  // namespace ptt
