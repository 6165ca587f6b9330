#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ptt/quote.hpp"
#include "ptt/semantics.hpp"
#include "support/gen.hpp"

using namespace ptt;
using ptt_test::TermGen;

namespace {
const TypeExpr B = TypeExpr::base();
const TypeExpr BB = TypeExpr::arrow(B, B);
const VarName vx("x", B);
const VarName vy("y", B);
const VarName vf("f", BB);
}  // namespace

TEST_CASE("value counts follow the tower rule") {
  CHECK(value_count(B) == 2);
  CHECK(value_count(BB) == 4);
  CHECK(value_count(TypeExpr::arrow(BB, B)) == 16);
  CHECK(value_count(TypeExpr::arrow(B, BB)) == 16);
  CHECK_THROWS_AS(value_count(TypeExpr::arrow(TypeExpr::arrow(BB, B), B), 100),
                  TooLargeError);
}

TEST_CASE("canonical enumeration") {
  auto bits = enum_values(B);
  REQUIRE(bits.size() == 2);
  CHECK(bits[0] == Value::bit(0));
  CHECK(bits[1] == Value::bit(1));

  auto tables = enum_values(BB);
  REQUIRE(tables.size() == 4);
  CHECK(tables[0] == Value::table(B, {Value::bit(0), Value::bit(0)}));  // const 0
  CHECK(tables[1] == Value::table(B, {Value::bit(0), Value::bit(1)}));  // identity
  CHECK(tables[2] == Value::table(B, {Value::bit(1), Value::bit(0)}));  // negation
  CHECK(tables[3] == Value::table(B, {Value::bit(1), Value::bit(1)}));  // const 1

  // Distinct and exhaustive for every small type.
  for (const TypeExpr& ty :
       {B, BB, TypeExpr::arrow(B, BB), TypeExpr::arrow(BB, B)}) {
    auto vals = enum_values(ty);
    CHECK(vals.size() == value_count(ty));
    for (size_t i = 0; i < vals.size(); ++i) {
      CHECK(value_index(vals[i]) == i);
      for (size_t j = i + 1; j < vals.size(); ++j) CHECK(vals[i] != vals[j]);
    }
  }
}

TEST_CASE("evaluation matches the implication table") {
  CHECK(eval(Term::bot(), {}) == Value::bit(0));
  Term xy = Term::imp(Term::var(vx), Term::var(vy));
  for (int a = 0; a <= 1; ++a)
    for (int b = 0; b <= 1; ++b) {
      Assignment asg = {{vx, Value::bit(a)}, {vy, Value::bit(b)}};
      int expect = a == 0 ? 1 : b;  // the standard table
      CHECK(eval(xy, asg) == Value::bit(expect));
    }
  CHECK(eval(Term::lam(vx, Term::var(vx)), {}) ==
        Value::table(B, {Value::bit(0), Value::bit(1)}));
  CHECK_THROWS_AS(eval(Term::var(vx), {}), UnboundVariableError);
}

TEST_CASE("apply_value") {
  auto tables = enum_values(BB);
  CHECK(apply_value(tables[1], Value::bit(1)) == Value::bit(1));
  CHECK(apply_value(tables[2], Value::bit(0)) == Value::bit(1));
  Value const0 = eval(Term::lam(vx, Term::bot()), {});
  CHECK(apply_value(const0, Value::bit(0)) == Value::bit(0));
  CHECK(apply_value(const0, Value::bit(1)) == Value::bit(0));
  CHECK_THROWS_AS(apply_value(Value::bit(0), Value::bit(0)), TypeError);
}

TEST_CASE("validity") {
  Term fx = Term::app(Term::var(vf), Term::var(vx));
  Term worked = equiv(Term::app(Term::var(vf), Term::app(Term::var(vf), fx)), fx);
  CHECK(is_valid(worked));
  CHECK_FALSE(is_valid(Term::bot()));
  CHECK(is_valid(disj(Term::var(vx), neg(Term::var(vx)))));
}

TEST_CASE("sequent validity") {
  CHECK(is_valid_sequent({Term::var(vx)}, Term::var(vx)));
  CHECK_FALSE(is_valid_sequent({}, Term::bot()));
  Term fa = Term::app(forall_term(BB), Term::var(VarName("h", TypeExpr::arrow(BB, B))));
  // { forall f } => f x with f : B->B free and x : B free.
  Term fa2 = Term::app(forall_term(B), Term::var(vf));
  CHECK(is_valid_sequent({fa2}, Term::app(Term::var(vf), Term::var(vx))));
}

TEST_CASE("countermodels come first in canonical order") {
  CHECK(countermodel(Term::bot()).value().empty());
  auto cm = countermodel(Term::var(vx));
  REQUIRE(cm.has_value());
  CHECK(cm->at(vx) == Value::bit(0));
  Term fx = Term::app(Term::var(vf), Term::var(vx));
  Term worked = equiv(Term::app(Term::var(vf), Term::app(Term::var(vf), fx)), fx);
  CHECK_FALSE(countermodel(worked).has_value());
  // f x alone fails first at f = const 0.
  auto cm2 = countermodel(fx);
  REQUIRE(cm2.has_value());
  CHECK(cm2->at(vf) == enum_values(BB)[0]);
}

TEST_CASE("serial and parallel scans agree") {
  TermGen gen(404);
  for (int i = 0; i < 150; ++i) {
    Term s = gen.formula(6);
    auto vars_set = free_vars(s);
    std::vector<VarName> vars(vars_set.begin(), vars_set.end());
    auto space = AssignmentSpace::over(vars);
    auto a = first_failing_index(space, {}, s, ScanMode::Serial);
    auto b = first_failing_index(space, {}, s, ScanMode::Parallel);
    CHECK(a == b);
  }
}

TEST_CASE("boolean equivalence denotes identity") {
  TermGen gen(505);
  for (int i = 0; i < 100; ++i) {
    Term s = gen.formula(4);
    Term t = gen.formula(4);
    std::set<VarName> vars = free_vars(s);
    for (const auto& v : free_vars(t)) vars.insert(v);
    auto space = AssignmentSpace::over({vars.begin(), vars.end()});
    bool pointwise = true;
    for (std::uint64_t k = 0; k < space.total; ++k) {
      Assignment a = space.decode(k);
      if (eval(s, a) != eval(t, a)) pointwise = false;
    }
    CHECK(is_valid(equiv(s, t)) == pointwise);
  }
}

TEST_CASE("guards throw cleanly") {
  VarName big("h", TypeExpr::arrow(TypeExpr::arrow(BB, B), B));
  CHECK_THROWS_AS(is_valid(equiv(Term::app(Term::var(big),
                                           Term::var(VarName("k", TypeExpr::arrow(BB, B)))),
                                 Term::bot()),
                           64),
                  TooLargeError);
}
