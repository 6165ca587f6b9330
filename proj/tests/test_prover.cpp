#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ptt/parser.hpp"
#include "ptt/pretty.hpp"
#include "ptt/prover.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace ptt;
using ptt_test::TermGen;

namespace {
const TypeExpr B = TypeExpr::base();
const TypeExpr BB = TypeExpr::arrow(B, B);
const VarName vx("x", B);
const VarName vy("y", B);
const VarName vf("f", BB);

bool propositional_rules_only(const Derivation& d) {
  if (d.rule() == Rule::Lam || d.rule() == Rule::BR) return false;
  for (const auto& p : d.premises())
    if (!propositional_rules_only(*p)) return false;
  return true;
}

bool sound(const DerivPtr& d) {
  return checks(*d) && is_valid_sequent(d->conclusion().assumptions(),
                                        d->conclusion().conclusion());
}
}  // namespace

TEST_CASE("is_propositional") {
  CHECK(is_propositional(Term::var(vx)));
  CHECK(is_propositional(Term::bot()));
  CHECK(is_propositional(Term::imp(Term::var(vx), Term::bot())));
  CHECK_FALSE(is_propositional(Term::app(Term::var(vf), Term::var(vx))));
  CHECK_FALSE(is_propositional(eq_formula(Term::var(vx), Term::var(vx))));
  // Every closed beta-normal formula is propositional.
  TermGen gen(707);
  for (int i = 0; i < 200; ++i) {
    Term t = beta_normalize(gen.closed_formula(6));
    CHECK(is_beta_normal(t));
    CHECK(is_closed(t));
    CHECK(is_propositional(t));
  }
}

TEST_CASE("taut_prove") {
  // Peirce's law, confirmed tautologous by the independent oracle first.
  Term peirce = Term::imp(
      Term::imp(Term::imp(Term::var(vx), Term::var(vy)), Term::var(vx)),
      Term::var(vx));
  REQUIRE(ptt_test::prop_valid(peirce));
  auto r = taut_prove(peirce);
  REQUIRE(std::holds_alternative<DerivPtr>(r));
  DerivPtr d = std::get<DerivPtr>(r);
  CHECK(sound(d));
  CHECK(d->conclusion() == Sequent({}, peirce));
  CHECK(propositional_rules_only(*d));

  auto r2 = taut_prove(Term::imp(Term::bot(), Term::var(vx)));
  CHECK(sound(std::get<DerivPtr>(r2)));

  auto r3 = taut_prove(Term::var(vx));
  REQUIRE(std::holds_alternative<NotTautologous>(r3));
  auto failure = std::get<NotTautologous>(r3);
  REQUIRE(failure.atom_assignment.size() == 1);
  CHECK(failure.atom_assignment[0].first == Term::var(vx));
  CHECK(failure.atom_assignment[0].second == false);
}

TEST_CASE("tautologous instances of tautologies are proved") {
  // Substituting arbitrary formulas for the atoms of a tautology keeps
  // taut_prove succeeding on the instance.
  Term taut = Term::imp(Term::var(vx), Term::imp(Term::var(vy), Term::var(vx)));
  TermGen gen(808);
  for (int i = 0; i < 50; ++i) {
    Term s1 = gen.formula(4);
    Term s2 = gen.formula(4);
    Term inst = substitute(substitute(taut, vx, s1), vy, s2);
    auto r = taut_prove(inst);
    REQUIRE(std::holds_alternative<DerivPtr>(r));
    CHECK(propositional_rules_only(*std::get<DerivPtr>(r)));
    CHECK(checks(*std::get<DerivPtr>(r)));
  }
}

TEST_CASE("cut") {
  DerivPtr main0 = Derivation::triv({Term::var(vx)}, Term::var(vx));
  CHECK(cut_derive(main0, {}) == main0);

  DerivPtr d1 = Derivation::triv({top_term()}, top_term());
  DerivPtr side = std::get<DerivPtr>(taut_prove(top_term()));
  DerivPtr cut1 = cut_derive(d1, {side});
  CHECK(sound(cut1));
  CHECK(cut1->conclusion() == Sequent({}, top_term()));

  // n = 2 with a surviving base assumption.
  Term s1 = Term::imp(Term::var(vx), Term::var(vx));
  Term s2 = top_term();
  std::vector<Term> all = {Term::var(vy), s1, s2};
  DerivPtr main2 = Derivation::triv(all, Term::var(vy));
  DerivPtr side1 = Derivation::weak(Term::var(vy), std::get<DerivPtr>(taut_prove(s1)));
  DerivPtr side2 = Derivation::weak(Term::var(vy), std::get<DerivPtr>(taut_prove(s2)));
  DerivPtr cut2 = cut_derive(main2, {side1, side2});
  CHECK(sound(cut2));
  CHECK(cut2->conclusion() == Sequent({Term::var(vy)}, Term::var(vy)));
}

TEST_CASE("and_intro and ref_derive") {
  std::vector<Term> a = {Term::var(vx), Term::var(vy)};
  DerivPtr d = and_intro(Derivation::triv(a, Term::var(vx)),
                         Derivation::triv(a, Term::var(vy)));
  CHECK(sound(d));
  CHECK(d->conclusion() == Sequent(a, conj(Term::var(vx), Term::var(vy))));

  DerivPtr r1 = ref_derive({}, Term::bot());
  CHECK(sound(r1));
  CHECK(r1->conclusion() == Sequent({}, equiv(Term::bot(), Term::bot())));
  Term fx = Term::app(Term::var(vf), Term::var(vx));
  DerivPtr r2 = ref_derive({Term::var(vx)}, fx);
  CHECK(sound(r2));
  CHECK(r2->conclusion() == Sequent({Term::var(vx)}, equiv(fx, fx)));
}

TEST_CASE("sub_derive") {
  DerivPtr d = Derivation::triv({Term::var(vx)}, Term::var(vx));
  DerivPtr same = sub_derive(d, vx, Term::var(vx));
  CHECK(sound(same));
  CHECK(same->conclusion() == d->conclusion());

  DerivPtr subbed = sub_derive(d, vx, top_term());
  CHECK(sound(subbed));
  CHECK(subbed->conclusion() == Sequent({top_term()}, top_term()));

  // From |- x === x substitute x := bot.
  DerivPtr refl = ref_derive({}, Term::var(vx));
  DerivPtr inst = sub_derive(refl, vx, Term::bot());
  CHECK(sound(inst));
  CHECK(inst->conclusion() == Sequent({}, equiv(Term::bot(), Term::bot())));

  // Instantiate the base enumeration disjunction at f y.
  DerivPtr en = enum_derive(B, vx);
  Term fy = Term::app(Term::var(vf), Term::var(vy));
  DerivPtr inst2 = sub_derive(en, vx, fy);
  CHECK(sound(inst2));
  Term expected_inst = big_or(
      {eq_formula(Term::bot(), fy), eq_formula(top_term(), fy)});
  CHECK(inst2->conclusion().conclusion() == expected_inst);
}

TEST_CASE("closed_prove") {
  auto r1 = closed_prove(top_term());
  CHECK(sound(std::get<DerivPtr>(r1)));

  Term red = Term::app(Term::lam(vx, Term::var(vx)), Term::bot());
  auto r2 = closed_prove(red);
  CHECK(std::holds_alternative<NotValid>(r2));

  Term q = eq_formula(quote(B, Value::bit(1)), top_term());
  auto r3 = closed_prove(q);
  REQUIRE(std::holds_alternative<DerivPtr>(r3));
  CHECK(sound(std::get<DerivPtr>(r3)));
  CHECK(std::get<DerivPtr>(r3)->conclusion() == Sequent({}, q));

  CHECK_THROWS_AS(closed_prove(Term::var(vx)), NotClosedError);
}

TEST_CASE("distrib_derive") {
  // Empty index set: top === top through the conventions.
  DerivPtr d0 = distrib_derive({});
  CHECK(sound(d0));
  CHECK(d0->conclusion() ==
        Sequent({}, equiv(top_term(), top_term())));

  // 1 x 1 collapses to x === x.
  DerivPtr d1 = distrib_derive({{vx}});
  CHECK(sound(d1));
  CHECK(d1->conclusion() == Sequent({}, equiv(Term::var(vx), Term::var(vx))));

  // 2 x 2: checked, and its conclusion is confirmed by the independent
  // 16-row oracle.
  std::vector<std::vector<VarName>> m = {
      {VarName("a0", B), VarName("a1", B)},
      {VarName("b0", B), VarName("b1", B)}};
  DerivPtr d2 = distrib_derive(m);
  CHECK(sound(d2));
  CHECK(ptt_test::prop_valid(d2->conclusion().conclusion()));

  CHECK_THROWS_AS(distrib_derive({{vx, vx}}), ShapeMismatchError);
  CHECK_THROWS_AS(distrib_derive({{vx}, {vy}}, 1), TooLargeError);
}

TEST_CASE("prop_rei_derive") {
  auto tables = enum_values(BB);
  // sigma = tau = B, a = identity, b = 1: top on the left.
  DerivPtr d1 = prop_rei_derive(B, B, tables[1], Value::bit(1));
  CHECK(sound(d1));
  Term lhs1 = d1->conclusion().conclusion().fun().arg();
  CHECK(lhs1 == top_term());

  // a = negation, b = 1: the left side mentions bot.
  DerivPtr d2 = prop_rei_derive(B, B, tables[2], Value::bit(1));
  CHECK(sound(d2));
  CHECK(d2->conclusion().conclusion().fun().arg() == Term::bot());

  // Valid for every a, b at sigma = tau = B.
  for (const auto& a : tables)
    for (const auto& b : enum_values(B)) {
      DerivPtr d = prop_rei_derive(B, B, a, b);
      CHECK(sound(d));
    }
}

TEST_CASE("enum_derive") {
  DerivPtr db = enum_derive(B, vx);
  CHECK(sound(db));
  Term expected = big_or({eq_formula(Term::bot(), Term::var(vx)),
                          eq_formula(top_term(), Term::var(vx))});
  CHECK(db->conclusion() == Sequent({}, expected));

  VarName w("w", BB);
  DerivPtr dbb = enum_derive(BB, w);
  CHECK(sound(dbb));
  CHECK(dbb->conclusion() == Sequent({}, enum_formula(BB, w)));
}

TEST_CASE("rep_derive") {
  // Base type, empty context, s = t: conclusion equals the body's.
  Term eq_xx = eq_formula(Term::var(vx), Term::var(vx));
  std::vector<Term> a0 = {eq_xx, Term::var(vx)};
  DerivPtr rep0 = rep_derive(B, Derivation::triv(a0, eq_xx),
                             Derivation::triv(a0, Term::var(vx)), {});
  CHECK(sound(rep0));
  CHECK(rep0->conclusion() == Sequent(a0, Term::var(vx)));

  // Base type inside an application argument.
  Term fx = Term::app(Term::var(vf), Term::var(vx));
  Term eq_xt = eq_formula(Term::var(vx), top_term());
  std::vector<Term> a1 = {eq_xt, fx};
  ContextPath c1 = {ContextStep::into_arg(Term::var(vf))};
  DerivPtr rep1 = rep_derive(B, Derivation::triv(a1, eq_xt),
                             Derivation::triv(a1, fx), c1);
  CHECK(sound(rep1));
  CHECK(rep1->conclusion() ==
        Sequent(a1, Term::app(Term::var(vf), top_term())));

  // Arrow type under a binder that captures none of the assumptions.
  VarName u("u", BB), v("v", BB), r("r", TypeExpr::arrow(BB, B)), w("w", B);
  Term eq_uv = eq_formula(Term::var(u), Term::var(v));
  ContextPath c2 = {
      ContextStep::into_arg(Term::var(r)),
      ContextStep::under_lam(w),
      ContextStep::into_fun(Term::var(w)),
  };
  Term body = plug(c2, Term::var(u));  // r (\w. u w)
  std::vector<Term> a2 = {eq_uv, body};
  DerivPtr rep2 = rep_derive(BB, Derivation::triv(a2, eq_uv),
                             Derivation::triv(a2, body), c2);
  CHECK(sound(rep2));
  CHECK(rep2->conclusion() == Sequent(a2, plug(c2, Term::var(v))));
}

TEST_CASE("all_derive") {
  VarName h("h", TypeExpr::arrow(B, B));
  DerivPtr da = all_derive(B, h, vx);
  CHECK(sound(da));
  Term fa = Term::app(forall_term(B), Term::var(h));
  CHECK(da->conclusion() ==
        Sequent({fa}, Term::app(Term::var(h), Term::var(vx))));

  VarName p("p", TypeExpr::arrow(BB, B));
  VarName w("w", BB);
  DerivPtr dbb = all_derive(BB, p, w);
  CHECK(checks(*dbb));
  CHECK(dbb->conclusion() ==
        Sequent({Term::app(forall_term(BB), Term::var(p))},
                Term::app(Term::var(p), Term::var(w))));
}

TEST_CASE("prove") {
  // The worked example.
  Term fx = Term::app(Term::var(vf), Term::var(vx));
  Term worked = equiv(Term::app(Term::var(vf), Term::app(Term::var(vf), fx)), fx);
  auto r = prove(worked);
  REQUIRE(std::holds_alternative<DerivPtr>(r));
  DerivPtr d = std::get<DerivPtr>(r);
  CHECK(checks(*d));
  CHECK(d->conclusion() == Sequent({}, worked));

  auto r2 = prove(eq_formula(Term::var(vx), Term::var(vx)));
  CHECK(sound(std::get<DerivPtr>(r2)));

  auto r3 = prove(fx);
  REQUIRE(std::holds_alternative<NotValid>(r3));
  CHECK(std::get<NotValid>(r3).countermodel.at(vf) == enum_values(BB)[0]);
}

TEST_CASE("prove is deterministic") {
  Term s = disj(Term::var(vx), neg(Term::var(vx)));
  auto r1 = prove(s);
  auto r2 = prove(s);
  CHECK(render_derivation_file(*std::get<DerivPtr>(r1)) ==
        render_derivation_file(*std::get<DerivPtr>(r2)));
}
