#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ptt/parser.hpp"
#include "ptt/pretty.hpp"
#include "ptt/prover.hpp"
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

TEST_CASE("types") {
  CHECK(parse_type("B") == B);
  CHECK(parse_type("B->B->B") == TypeExpr::arrow(B, TypeExpr::arrow(B, B)));
  CHECK(parse_type("(B->B)->B") == TypeExpr::arrow(BB, B));
  CHECK_THROWS_AS(parse_type("->B"), ParseError);
}

TEST_CASE("terms and sugar") {
  CHECK(parse_term_file("bot => bot") == top_term());
  CHECK(parse_term_file("top") == top_term());
  CHECK(parse_term_file("var x : B. var y : B. x \\/ y") ==
        disj(Term::var(vx), Term::var(vy)));
  CHECK(parse_term_file("var x : B. var y : B. x /\\ y") ==
        conj(Term::var(vx), Term::var(vy)));
  CHECK(parse_term_file("var x : B. ~x") == neg(Term::var(vx)));
  CHECK(parse_term_file("var x : B. var y : B. x <=> y") ==
        equiv(Term::var(vx), Term::var(vy)));
  CHECK(parse_term_file("var x : B. x == x") ==
        eq_formula(Term::var(vx), Term::var(vx)));
  CHECK(parse_term_file("forall x:B. x => x") ==
        forall_formula(vx, Term::imp(Term::var(vx), Term::var(vx))));
  // Application is left-associative; => right-associative.
  VarName g("g", TypeExpr::arrow(B, TypeExpr::arrow(B, B)));
  Term gxy = parse_term_file("var g : B->B->B. var x : B. var y : B. g x y");
  CHECK(gxy == Term::app(Term::app(Term::var(g), Term::var(vx)), Term::var(vy)));
  Term chain = parse_term_file("var x : B. var y : B. x => y => x");
  CHECK(chain == Term::imp(Term::var(vx), Term::imp(Term::var(vy), Term::var(vx))));
  // The bare constant has a spelling.
  CHECK(parse_term_file("var x : B. var y : B. imp x y") ==
        Term::imp(Term::var(vx), Term::var(vy)));
}

TEST_CASE("parser rejects bad input") {
  CHECK_THROWS_AS(parse_term_file("var x : B. x x"), ParseError);   // ill-typed app
  CHECK_THROWS_AS(parse_term_file("y"), TypeError);                 // undeclared
  CHECK_THROWS_AS(parse_term_file("var x : B. var x : B. x"), ParseError);
  CHECK_THROWS_AS(parse_term_file("var bot : B. bot"), ParseError);
  CHECK_THROWS_AS(parse_term_file("var x : B. x =>"), ParseError);
  CHECK_THROWS_AS(parse_term_file("var f : B->B. f => f"), ParseError);
}

TEST_CASE("error positions") {
  try {
    parse_term_file("var x : B.\nx )");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("sequents") {
  Sequent q1 = parse_sequent_file("var x : B. x |- x");
  CHECK(q1.assumptions().size() == 1);
  CHECK(q1.conclusion() == Term::var(vx));
  Sequent q2 = parse_sequent_file("|- bot => bot");
  CHECK(q2.assumptions().empty());
  CHECK(q2.conclusion() == top_term());
  // Set semantics: duplicates collapse.
  Sequent q3 = parse_sequent_file("var x : B. x, x |- x");
  CHECK(q3.assumptions().size() == 1);
}

TEST_CASE("round trip on generated terms") {
  TermGen gen(606);
  for (int i = 0; i < 300; ++i) {
    Term t = gen.gen(i % 3 == 0 ? BB : B, 6);
    for (bool sugar : {false, true}) {
      PrintOptions o;
      o.sugar = sugar;
      Term back = parse_term_file(render_term_file(t, o));
      CHECK(back == t);
    }
  }
}

TEST_CASE("round trip on quote terms and sequents") {
  for (const auto& v : enum_values(TypeExpr::arrow(BB, B))) {
    Term q = quote(TypeExpr::arrow(BB, B), v);
    CHECK(parse_term_file(render_term_file(q)) == q);
  }
  Sequent s({Term::var(vx), neg(Term::var(vy))}, Term::var(vx));
  CHECK(parse_sequent_file(render_sequent_file(s)) == s);
}

TEST_CASE("desugaring is definitional") {
  Term t = parse_term_file("var x : B. var y : B. x /\\ y");
  CHECK(t == neg(disj(neg(Term::var(vx)), neg(Term::var(vy)))));
}

TEST_CASE("derivation files") {
  DerivPtr d = parse_derivation_file("var x : B. (triv (x) x)");
  CHECK(d->rule() == Rule::Triv);
  CHECK(d->conclusion() == Sequent({Term::var(vx)}, Term::var(vx)));
  CHECK(checks(*d));

  CHECK_THROWS_AS(parse_derivation_file("var x : B. (bogus (x) x)"),
                  ParseError);

  DerivPtr mp = parse_derivation_file(
      "var x : B. var y : B.\n"
      "(mp\n"
      "  (triv (x => y, x) x => y)\n"
      "  (triv (x => y, x) x))");
  CHECK(mp->rule() == Rule::MP);
  CHECK(mp->conclusion().conclusion() == Term::var(vy));
  CHECK(checks(*mp));

  // mp whose first premise is no implication cannot be reconstructed.
  CHECK_THROWS_AS(
      parse_derivation_file("var x : B. (mp (triv (x) x) (triv (x) x))"),
      ParseError);
}

TEST_CASE("derivation round trip") {
  DerivPtr d = std::get<DerivPtr>(
      taut_prove(parse_term_file("var x : B. ((x => bot) => x) => x")));
  std::string file = render_derivation_file(*d);
  DerivPtr back = parse_derivation_file(file);
  CHECK(*back == *d);
  CHECK(render_derivation_file(*back) == file);
}

TEST_CASE("value literals") {
  CHECK(parse_value("0", B) == Value::bit(0));
  CHECK(parse_value("[1,0]", BB) ==
        Value::table(B, {Value::bit(1), Value::bit(0)}));
  for (const auto& v : enum_values(TypeExpr::arrow(BB, B)))
    CHECK(parse_value(v.to_string(), TypeExpr::arrow(BB, B)) == v);
  CHECK_THROWS_AS(parse_value("[0]", BB), ParseError);
  CHECK_THROWS_AS(parse_value("2", B), ParseError);
}
