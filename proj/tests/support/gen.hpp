#pragma once

// Deterministic random term generation for property tests. All generators
// take explicit seeds so failures reproduce.

#include <random>
#include <vector>

#include "ptt/quote.hpp"
#include "ptt/term.hpp"

namespace ptt_test {

using namespace ptt;

struct TermGen {
  std::mt19937_64 rng;
  // Free variables available per type.
  std::vector<VarName> pool = {
      VarName("x", TypeExpr::base()),
      VarName("y", TypeExpr::base()),
      VarName("f", TypeExpr::arrow(TypeExpr::base(), TypeExpr::base())),
      VarName("g", TypeExpr::arrow(TypeExpr::base(),
                                   TypeExpr::arrow(TypeExpr::base(),
                                                   TypeExpr::base()))),
  };

  explicit TermGen(std::uint64_t seed) : rng(seed) {}

  int pick(int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

  // The smallest canonical inhabitant of a type.
  Term ground(const TypeExpr& ty) {
    if (ty.is_base()) return Term::bot();
    VarName b("u", ty.domain());
    return Term::lam(b, ground(ty.codomain()));
  }

  // A well-typed term of the given type; `scope` holds lambda-bound
  // variables usable in addition to the pool.
  Term gen(const TypeExpr& ty, int budget, std::vector<VarName>& scope) {
    std::vector<VarName> usable;
    for (const auto& v : pool)
      if (v.type == ty) usable.push_back(v);
    for (const auto& v : scope)
      if (v.type == ty) usable.push_back(v);

    if (budget <= 0) {
      if (!usable.empty()) return Term::var(usable[static_cast<size_t>(pick(
          static_cast<int>(usable.size())))]);
      return ground(ty);
    }

    int choice = pick(10);
    if (choice < 3 && !usable.empty())
      return Term::var(usable[static_cast<size_t>(
          pick(static_cast<int>(usable.size())))]);
    if (ty.is_base()) {
      if (choice < 5) return Term::bot();
      if (choice < 8)
        return Term::imp(gen(ty, budget / 2, scope), gen(ty, budget / 2, scope));
      // Application with a small argument type.
      TypeExpr arg_ty = pick(2) ? TypeExpr::base()
                                : TypeExpr::arrow(TypeExpr::base(),
                                                  TypeExpr::base());
      Term fun = gen(TypeExpr::arrow(arg_ty, ty), budget / 2, scope);
      Term arg = gen(arg_ty, budget / 2, scope);
      return Term::app(fun, arg);
    }
    // Arrow type: usually a lambda, sometimes an application.
    if (choice < 8) {
      VarName binder("b" + std::to_string(pick(1000)), ty.domain());
      scope.push_back(binder);
      Term body = gen(ty.codomain(), budget - 1, scope);
      scope.pop_back();
      return Term::lam(binder, body);
    }
    TypeExpr arg_ty = TypeExpr::base();
    Term fun = gen(TypeExpr::arrow(arg_ty, ty), budget / 2, scope);
    Term arg = gen(arg_ty, budget / 2, scope);
    return Term::app(fun, arg);
  }

  Term gen(const TypeExpr& ty, int budget) {
    std::vector<VarName> scope;
    return gen(ty, budget, scope);
  }

  Term formula(int budget) { return gen(TypeExpr::base(), budget); }

  // A closed formula: randomly generated, then closed by abstracting the
  // free variables and applying ground arguments.
  Term closed_formula(int budget) {
    Term t = formula(budget);
    for (const auto& v : free_vars(t)) {
      Term lam = Term::lam(v, t);
      t = Term::app(lam, ground(v.type));
    }
    return t;
  }
};

// All beta-normal formulas of surface-grammar size <= max_size over the
// signature {x:B, y:B, f:B->B}: t ::= x | y | bot | f t | t => t.
inline std::vector<Term> small_formula_corpus(int max_size) {
  TypeExpr B = TypeExpr::base();
  VarName x("x", B), y("y", B), f("f", TypeExpr::arrow(B, B));
  std::vector<std::vector<Term>> by_size(static_cast<size_t>(max_size) + 1);
  by_size[1] = {Term::var(x), Term::var(y), Term::bot()};
  for (int n = 2; n <= max_size; ++n) {
    for (const auto& t : by_size[static_cast<size_t>(n - 1)])
      by_size[static_cast<size_t>(n)].push_back(
          Term::app(Term::var(f), t));
    for (int i = 1; i + 1 < n; ++i)
      for (const auto& a : by_size[static_cast<size_t>(i)])
        for (const auto& b : by_size[static_cast<size_t>(n - 1 - i)])
          by_size[static_cast<size_t>(n)].push_back(Term::imp(a, b));
  }
  std::vector<Term> corpus;
  for (const auto& v : by_size)
    for (const auto& t : v) corpus.push_back(t);
  return corpus;
}

// All propositional formulas over up to `vars` Boolean variables with
// grammar size <= max_size: t ::= p_i | bot | t => t.
inline std::vector<Term> propositional_corpus(int vars, int max_size) {
  TypeExpr B = TypeExpr::base();
  std::vector<Term> leaves = {Term::bot()};
  for (int i = 0; i < vars; ++i)
    leaves.push_back(Term::var(VarName("p" + std::to_string(i + 1), B)));
  std::vector<std::vector<Term>> by_size(static_cast<size_t>(max_size) + 1);
  by_size[1] = leaves;
  for (int n = 3; n <= max_size; n += 2) {
    for (int i = 1; i + 1 < n; ++i)
      for (const auto& a : by_size[static_cast<size_t>(i)])
        for (const auto& b : by_size[static_cast<size_t>(n - 1 - i)])
          by_size[static_cast<size_t>(n)].push_back(Term::imp(a, b));
  }
  std::vector<Term> corpus;
  for (const auto& v : by_size)
    for (const auto& t : v) corpus.push_back(t);
  return corpus;
}

}  // namespace ptt_test
