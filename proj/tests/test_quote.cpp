#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ptt/pretty.hpp"
#include "ptt/quote.hpp"
#include "support/oracle.hpp"

using namespace ptt;

namespace {
const TypeExpr B = TypeExpr::base();
const TypeExpr BB = TypeExpr::arrow(B, B);
const VarName vx("x", B);
const VarName vy("y", B);
}  // namespace

TEST_CASE("connectives expand literally") {
  CHECK(top_term() == Term::imp(Term::bot(), Term::bot()));
  Term x = Term::var(vx), y = Term::var(vy);
  CHECK(neg(x) == Term::imp(x, Term::bot()));
  CHECK(disj(x, y) == Term::imp(Term::imp(x, y), y));
  CHECK(conj(x, y) == neg(disj(neg(x), neg(y))));
  CHECK(equiv(x, y) == conj(Term::imp(x, y), Term::imp(y, x)));
  CHECK_THROWS_AS(neg(Term::var(VarName("f", BB))), TypeError);
}

TEST_CASE("connective truth tables against the independent oracle") {
  Term x = Term::var(vx), y = Term::var(vy);
  for (int a = 0; a <= 1; ++a)
    for (int b = 0; b <= 1; ++b) {
      std::map<VarName, bool> v = {{vx, a == 1}, {vy, b == 1}};
      CHECK(ptt_test::prop_eval(equiv(x, y), v) == (a == b));
      CHECK(ptt_test::prop_eval(conj(x, y), v) == (a == 1 && b == 1));
      CHECK(ptt_test::prop_eval(disj(x, y), v) == (a == 1 || b == 1));
      CHECK(ptt_test::prop_eval(neg(x), v) == (a == 0));
      // Cross-check the evaluator against the oracle.
      Assignment asg = {{vx, Value::bit(a)}, {vy, Value::bit(b)}};
      CHECK((eval(conj(x, y), asg) == Value::bit(1)) ==
            ptt_test::prop_eval(conj(x, y), v));
    }
  CHECK(eval(conj(top_term(), Term::bot()), {}) == Value::bit(0));
}

TEST_CASE("empty and singleton folds") {
  CHECK(big_or({}) == Term::bot());
  CHECK(big_and({}) == top_term());
  Term x = Term::var(vx);
  CHECK(big_or({x}) == x);
  CHECK(big_and({x}) == x);
  Term y = Term::var(vy);
  CHECK(big_or({x, y, Term::bot()}) == disj(x, disj(y, Term::bot())));
}

TEST_CASE("base quotes") {
  CHECK(quote(B, Value::bit(0)) == Term::bot());
  CHECK(quote(B, Value::bit(1)) == top_term());
}

TEST_CASE("denotational completeness at desk scale") {
  for (const TypeExpr& ty :
       {B, BB, TypeExpr::arrow(B, BB), TypeExpr::arrow(BB, B)}) {
    for (const auto& a : enum_values(ty)) {
      Term q = quote(ty, a);
      CHECK(is_closed(q));
      CHECK(q.type() == ty);
      CHECK(eval(q, {}) == a);
    }
  }
}

TEST_CASE("quote is semantically injective") {
  auto vals = enum_values(BB);
  for (size_t i = 0; i < vals.size(); ++i)
    for (size_t j = i + 1; j < vals.size(); ++j)
      CHECK(eval(quote(BB, vals[i]), {}) != eval(quote(BB, vals[j]), {}));
}

TEST_CASE("forall term") {
  VarName f("f", BB);
  Term expected = Term::lam(
      f, big_and({Term::app(Term::var(f), Term::bot()),
                  Term::app(Term::var(f), top_term())}));
  CHECK(forall_term(B) == expected);
  CHECK(is_closed(forall_term(B)));
  CHECK(is_closed(forall_term(BB)));

  for (const TypeExpr& ty : {B, BB}) {
    Value ft = eval(forall_term(ty), {});
    for (const auto& g : enum_values(TypeExpr::arrow(ty, B))) {
      bool expect = true;
      for (const auto& c : enum_values(ty))
        expect = expect && apply_value(g, c) == Value::bit(1);
      CHECK((apply_value(ft, g) == Value::bit(1)) == expect);
    }
  }
}

TEST_CASE("identity predicate terms") {
  Term expected =
      Term::lam(vx, Term::lam(vy, equiv(Term::var(vx), Term::var(vy))));
  CHECK(eq_term(B) == expected);

  // Arrow case unfolds to the pointwise quantifier.
  VarName f("f", BB), g("g", BB);
  Term pointwise = eq_formula(Term::app(Term::var(f), Term::var(vx)),
                              Term::app(Term::var(g), Term::var(vx)));
  Term expected_bb = Term::lam(
      f, Term::lam(g, Term::app(forall_term(B), Term::lam(vx, pointwise))));
  CHECK(eq_term(BB) == expected_bb);

  for (const TypeExpr& ty : {B, BB}) {
    Value et = eval(eq_term(ty), {});
    for (const auto& a : enum_values(ty))
      for (const auto& b : enum_values(ty))
        CHECK((apply_value(apply_value(et, a), b) == Value::bit(1)) == (a == b));
  }
}

TEST_CASE("emitted terms are deterministic") {
  auto vals = enum_values(BB);
  for (const auto& a : vals) {
    CHECK(pretty(quote(BB, a)) == pretty(quote(BB, a)));
    CHECK(quote(BB, a) == quote(BB, a));
  }
  CHECK(pretty(forall_term(BB)) == pretty(forall_term(BB)));
}
