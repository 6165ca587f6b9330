#include "ptt/prover.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>

namespace ptt {

namespace {

// -- assumption bookkeeping ----------------------------------------------

std::vector<Term> with_extra(const std::vector<Term>& a, const Term& s) {
  std::vector<Term> out = a;
  out.push_back(s);
  return out;
}

// Weakens d until its assumption set equals `target` (which must be a
// superset of the current assumptions). Added formulas go in canonical
// order.
DerivPtr weak_to(DerivPtr d, const std::vector<Term>& target) {
  Sequent want(target, d->conclusion().conclusion());
  for (const auto& t : want.assumptions())
    if (!d->conclusion().contains(t)) d = Derivation::weak(t, d);
  if (!d->conclusion().same_assumptions(want))
    throw ShapeMismatchError("weak_to: target is not a superset");
  return d;
}

// Injective identifier-safe encoding of a type, used to suffix generated
// variable names: one derivation file has a single type per identifier, so
// helper variables of different types must not share names.
std::string type_tag(const TypeExpr& t) {
  if (t.is_base()) return "B";
  return "F" + type_tag(t.domain()) + type_tag(t.codomain());
}

std::set<std::string> idents_of(std::initializer_list<const Term*> terms) {
  std::set<std::string> out;
  for (const Term* t : terms) collect_idents(*t, out);
  return out;
}

// -- propositional skeleton ------------------------------------------------

struct Prop {
  enum Kind { Atom, Bot, Imp } kind;
  Term term;  // the exact subterm this node covers
  int atom = -1;
  std::unique_ptr<Prop> l, r;

  explicit Prop(Kind k, Term t) : kind(k), term(std::move(t)) {}
};

std::unique_ptr<Prop> decompose(const Term& t, std::vector<Term>& atoms,
                                std::map<Term, int, bool (*)(const Term&, const Term&)>& index) {
  if (t == Term::bot()) return std::make_unique<Prop>(Prop::Bot, t);
  if (t.is_imp_app()) {
    auto node = std::make_unique<Prop>(Prop::Imp, t);
    node->l = decompose(t.imp_lhs(), atoms, index);
    node->r = decompose(t.imp_rhs(), atoms, index);
    return node;
  }
  auto node = std::make_unique<Prop>(Prop::Atom, t);
  auto it = index.find(t);
  if (it == index.end()) {
    node->atom = static_cast<int>(atoms.size());
    index.emplace(t, node->atom);
    atoms.push_back(t);
  } else {
    node->atom = it->second;
  }
  return node;
}

bool eval_prop(const Prop& p, std::uint64_t bits, size_t n) {
  switch (p.kind) {
    case Prop::Atom:
      return (bits >> (n - 1 - static_cast<size_t>(p.atom))) & 1;
    case Prop::Bot:
      return false;
    case Prop::Imp:
      return !eval_prop(*p.l, bits, n) || eval_prop(*p.r, bits, n);
  }
  return false;
}

// The case-split schema |- (p -> q) -> ((p -> bot) -> q) -> q, derived from
// the five propositional rules and replayed per instance.
DerivPtr case_split_schema(const Term& p, const Term& q) {
  Term np = neg(p), nq = neg(q);
  Term pq = Term::imp(p, q), npq = Term::imp(np, q);
  std::vector<Term> a3 = {pq, npq, nq};
  std::vector<Term> a3p = with_extra(a3, p);
  DerivPtr t3 = Derivation::mp(Derivation::triv(a3p, pq),
                               Derivation::triv(a3p, p));         // q
  DerivPtr t5 = Derivation::mp(Derivation::triv(a3p, nq), t3);    // bot
  DerivPtr t6 = Derivation::ded(p, t5);                           // ~p
  DerivPtr t8 = Derivation::mp(Derivation::triv(a3, npq), t6);    // q
  DerivPtr t10 = Derivation::mp(Derivation::triv(a3, nq), t8);    // bot
  DerivPtr t12 = Derivation::dn(Derivation::ded(nq, t10));        // q
  return Derivation::ded(pq, Derivation::ded(npq, t12));
}

// Kalmar step: under the full literal set, derive the subformula or its
// negation according to its truth value. Duplicated subformulas (the
// connective expansions repeat their arguments) share their derivations.
struct KalmarLeaf {
  const std::vector<Term>& literals;  // all n, fixed
  std::uint64_t bits;
  size_t n;
  std::unordered_map<const void*, std::pair<bool, DerivPtr>> memo;

  std::pair<bool, DerivPtr> derive(const Prop& p) {
    auto it = memo.find(p.term.raw());
    if (it != memo.end()) return it->second;
    auto result = derive_uncached(p);
    memo.emplace(p.term.raw(), result);
    return result;
  }

  std::pair<bool, DerivPtr> derive_uncached(const Prop& p) {
    switch (p.kind) {
      case Prop::Atom: {
        bool v = eval_prop(p, bits, n);
        Term lit = v ? p.term : neg(p.term);
        return {v, Derivation::triv(literals, lit)};
      }
      case Prop::Bot: {
        std::vector<Term> b = with_extra(literals, Term::bot());
        DerivPtr d = Derivation::ded(Term::bot(),
                                     Derivation::triv(b, Term::bot()));
        return {false, weak_to(d, literals)};
      }
      case Prop::Imp: {
        auto [vl, dl] = derive(*p.l);
        auto [vr, dr] = derive(*p.r);
        const Term& lt = p.l->term;
        const Term& rt = p.r->term;
        if (!vl) {
          // A |- ~l gives A |- l -> r through ex falso.
          std::vector<Term> b = with_extra(literals, lt);
          DerivPtr dc = Derivation::mp(Derivation::weak(lt, dl),
                                       Derivation::triv(b, lt));  // bot
          DerivPtr dd = Derivation::ded(neg(rt), Derivation::weak(neg(rt), dc));
          // When l is itself ~r, the discharge above also consumed l;
          // restore before discharging it for real.
          DerivPtr de = weak_to(Derivation::dn(dd), b);            // r
          DerivPtr df = Derivation::ded(lt, de);                   // l -> r
          return {true, weak_to(df, literals)};
        }
        if (vr) {
          DerivPtr d = Derivation::ded(lt, Derivation::weak(lt, dr));
          return {true, weak_to(d, literals)};
        }
        // l true, r false: A |- ~(l -> r).
        std::vector<Term> b = with_extra(literals, p.term);
        DerivPtr u3 = Derivation::mp(Derivation::triv(b, p.term),
                                     Derivation::weak(p.term, dl));  // r
        DerivPtr u5 = Derivation::mp(Derivation::weak(p.term, dr), u3);  // bot
        DerivPtr u6 = Derivation::ded(p.term, u5);
        return {false, weak_to(u6, literals)};
      }
    }
    throw ShapeMismatchError("unreachable skeleton kind");
  }
};

Term literal(const Term& atom, bool v) { return v ? atom : neg(atom); }

// Propositional proof trees are closed under substitution of variables:
// mapping every sequent and payload through the same substitution yields
// another checking tree. Proving a small schema over fresh atoms and
// instantiating it keeps derivations of schematic tautologies linear in
// the instance size.
DerivPtr subst_prop_tree(const DerivPtr& d,
                         const std::vector<std::pair<VarName, Term>>& subs,
                         std::map<const Derivation*, DerivPtr>& memo) {
  auto it = memo.find(d.get());
  if (it != memo.end()) return it->second;
  auto sub_term = [&](const Term& t) { return substitute_many(t, subs); };
  std::vector<Term> assumptions;
  for (const auto& a : d->conclusion().assumptions())
    assumptions.push_back(sub_term(a));
  Sequent concl(std::move(assumptions), sub_term(d->conclusion().conclusion()));
  std::vector<DerivPtr> premises;
  for (const auto& p : d->premises())
    premises.push_back(subst_prop_tree(p, subs, memo));
  std::optional<Term> weak_added, ded_discharged;
  if (d->weak_added()) weak_added = sub_term(*d->weak_added());
  if (d->ded_discharged()) ded_discharged = sub_term(*d->ded_discharged());
  if (d->br_payload() || d->rule() == Rule::Lam || d->rule() == Rule::BR)
    throw ShapeMismatchError("subst_prop_tree: not a propositional tree");
  DerivPtr out = Derivation::raw(d->rule(), std::move(concl),
                                 std::move(premises), std::move(weak_added),
                                 std::move(ded_discharged));
  memo.emplace(d.get(), out);
  return out;
}

// |- schema_builder(p1..pk)[pi := ti] where the pi are fresh for the ti, so
// the sequential substitution cannot chain.
DerivPtr taut_schema(
    const std::vector<Term>& instances,
    const std::function<Term(const std::vector<Term>&)>& schema_builder,
    std::uint64_t guard) {
  std::set<std::string> avoid;
  for (const auto& t : instances) collect_idents(t, avoid);
  std::vector<VarName> vars;
  std::vector<Term> var_terms;
  std::vector<std::pair<VarName, Term>> subs;
  for (size_t i = 0; i < instances.size(); ++i) {
    VarName v = fresh_var("p", TypeExpr::base(), avoid);
    avoid.insert(v.id);
    vars.push_back(v);
    var_terms.push_back(Term::var(v));
    subs.emplace_back(v, instances[i]);
  }
  TautResult tr = taut_prove(schema_builder(var_terms), guard);
  if (std::holds_alternative<NotTautologous>(tr))
    throw ShapeMismatchError("taut_schema: schema is not a tautology");
  std::map<const Derivation*, DerivPtr> memo;
  return subst_prop_tree(std::get<DerivPtr>(tr), subs, memo);
}

struct KalmarProver {
  const Prop& root;
  const std::vector<Term>& atoms;
  size_t n;

  // Assumes validity was established; builds |- root.term by eliminating
  // atoms left to right over the assignment tree.
  DerivPtr build(size_t j, std::uint64_t prefix_bits,
                 std::vector<Term>& prefix_lits) {
    if (j == n) {
      std::vector<Term> lits;
      lits.reserve(n);
      for (size_t i = 0; i < n; ++i)
        lits.push_back(
            literal(atoms[i], (prefix_bits >> (n - 1 - i)) & 1));
      KalmarLeaf leaf{lits, prefix_bits, n};
      auto [v, d] = leaf.derive(root);
      if (!v) throw ShapeMismatchError("kalmar: leaf derived a negation");
      return d;
    }
    const Term& p = atoms[j];
    prefix_lits.push_back(p);
    DerivPtr d_true =
        build(j + 1, prefix_bits | (1ull << (n - 1 - j)), prefix_lits);
    prefix_lits.back() = neg(p);
    DerivPtr d_false = build(j + 1, prefix_bits, prefix_lits);
    prefix_lits.pop_back();
    DerivPtr ded_t = Derivation::ded(p, d_true);
    DerivPtr ded_f = Derivation::ded(neg(p), d_false);
    DerivPtr schema = weak_to(case_split_schema(p, root.term), prefix_lits);
    return Derivation::mp(Derivation::mp(schema, ded_t), ded_f);
  }
};

}  // namespace

bool is_propositional(const Term& s) {
  if (!s.type().is_base()) return false;
  if (s == Term::bot()) return true;
  if (s.kind() == TermKind::FreeVar) return true;
  if (s.is_imp_app())
    return is_propositional(s.imp_lhs()) && is_propositional(s.imp_rhs());
  return false;
}

TautResult taut_prove(const Term& s, std::uint64_t guard) {
  if (!s.type().is_base())
    throw TypeError("taut_prove expects a formula, got " +
                    s.type().to_string());
  std::vector<Term> atoms;
  std::map<Term, int, bool (*)(const Term&, const Term&)> index(
      [](const Term& a, const Term& b) { return Term::compare(a, b) < 0; });
  std::unique_ptr<Prop> root = decompose(s, atoms, index);
  const size_t n = atoms.size();
  if (n >= 63 || (1ull << n) > guard)
    throw TooLargeError("taut_prove: 2^" + std::to_string(n) +
                        " truth-table rows exceed the guard");
  const std::uint64_t rows = 1ull << n;
  for (std::uint64_t v = 0; v < rows; ++v) {
    if (!eval_prop(*root, v, n)) {
      NotTautologous failure;
      for (size_t i = 0; i < n; ++i)
        failure.atom_assignment.emplace_back(atoms[i],
                                             (v >> (n - 1 - i)) & 1);
      return failure;
    }
  }
  KalmarProver kp{*root, atoms, n};
  std::vector<Term> prefix;
  return kp.build(0, 0, prefix);
}

DerivPtr cut_derive(const DerivPtr& d_main, const std::vector<DerivPtr>& ds) {
  if (ds.empty()) return d_main;
  const Sequent& base = ds.front()->conclusion();
  for (const auto& d : ds)
    if (!d->conclusion().same_assumptions(base))
      throw ShapeMismatchError("cut: side derivations disagree on assumptions");
  std::vector<Term> extra;
  for (const auto& t : d_main->conclusion().assumptions())
    if (!base.contains(t)) extra.push_back(t);
  auto provider = [&](const Term& t) -> DerivPtr {
    for (const auto& d : ds)
      if (d->conclusion().conclusion() == t) return d;
    throw ShapeMismatchError(
        "cut: no side derivation concludes a required assumption");
  };
  DerivPtr cur = d_main;
  for (auto it = extra.rbegin(); it != extra.rend(); ++it) {
    cur = Derivation::ded(*it, cur);
    cur = Derivation::mp(
        cur, weak_to(provider(*it), cur->conclusion().assumptions()));
  }
  if (!cur->conclusion().same_assumptions(base))
    throw ShapeMismatchError("cut: assumptions did not reduce to A");
  return cur;
}

DerivPtr and_intro(const DerivPtr& d1, const DerivPtr& d2,
                   std::uint64_t guard) {
  if (!d1->conclusion().same_assumptions(d2->conclusion()))
    throw ShapeMismatchError("and_intro: premises differ in assumptions");
  const Term& s1 = d1->conclusion().conclusion();
  const Term& s2 = d2->conclusion().conclusion();
  DerivPtr d = taut_schema(
      {s1, s2},
      [](const std::vector<Term>& v) {
        return Term::imp(v[0], Term::imp(v[1], conj(v[0], v[1])));
      },
      guard);
  d = weak_to(d, d1->conclusion().assumptions());
  return Derivation::mp(Derivation::mp(d, d1), d2);
}

DerivPtr ref_derive(const std::vector<Term>& assumptions, const Term& s,
                    std::uint64_t guard) {
  DerivPtr d = taut_schema(
      {s}, [](const std::vector<Term>& v) { return equiv(v[0], v[0]); },
      guard);
  return weak_to(d, assumptions);
}

// -- rewriting helpers -----------------------------------------------------

namespace {

// Finds the first position (leftmost-outermost) where w0 and w1 differ by
// exactly the replacement old_t -> new_t, as a capturing context path.
// `names` supplies binder names per lambda-descent depth; missing entries
// get deterministic fresh names.
struct DiffFinder {
  Term old_t;
  Term new_t;
  const std::vector<VarName>* preferred;
  std::set<std::string> avoid;

  std::optional<ContextPath> find(const Term& w0, const Term& w1) {
    std::vector<VarName> crossed;
    ContextPath path;
    if (rec(w0, w1, crossed, path)) return path;
    return std::nullopt;
  }

  bool rec(const Term& u0, const Term& u1, std::vector<VarName>& crossed,
           ContextPath& path) {
    if (u0 == u1) return false;
    if (u0 == detail::close_multi(old_t, crossed) &&
        u1 == detail::close_multi(new_t, crossed))
      return true;
    if (u0.kind() != u1.kind())
      throw ShapeMismatchError(
          "rewrite: terms differ outside the replacement sites");
    switch (u0.kind()) {
      case TermKind::App: {
        if (u0.fun() != u1.fun()) {
          path.push_back(ContextStep::into_fun(
              detail::open_multi(u0.arg(), crossed)));
          if (rec(u0.fun(), u1.fun(), crossed, path)) return true;
          throw ShapeMismatchError("rewrite: mismatched function parts");
        }
        path.push_back(
            ContextStep::into_arg(detail::open_multi(u0.fun(), crossed)));
        if (rec(u0.arg(), u1.arg(), crossed, path)) return true;
        throw ShapeMismatchError("rewrite: mismatched argument parts");
      }
      case TermKind::Lam: {
        if (u0.binder_type() != u1.binder_type())
          throw ShapeMismatchError("rewrite: binder types differ");
        VarName binder = crossed.size() < (preferred ? preferred->size() : 0)
                             ? (*preferred)[crossed.size()]
                             : fresh_var("c_" + type_tag(u0.binder_type()), u0.binder_type(), avoid);
        avoid.insert(binder.id);
        path.push_back(ContextStep::under_lam(binder));
        crossed.push_back(binder);
        bool hit = rec(u0.body(), u1.body(), crossed, path);
        crossed.pop_back();
        if (hit) return true;
        throw ShapeMismatchError("rewrite: mismatched lambda bodies");
      }
      default:
        throw ShapeMismatchError(
            "rewrite: leaf mismatch outside the replacement sites");
    }
  }
};

ContextPath first_diff_path(const Term& w0, const Term& w1, const Term& old_t,
                            const Term& new_t,
                            const std::vector<VarName>* preferred) {
  DiffFinder f{old_t, new_t, preferred, {}};
  collect_idents(w0, f.avoid);
  collect_idents(w1, f.avoid);
  collect_idents(old_t, f.avoid);
  collect_idents(new_t, f.avoid);
  auto p = f.find(w0, w1);
  if (!p)
    throw ShapeMismatchError("rewrite: start and target formulas are equal");
  return *p;
}

std::pair<Term, Term> destructure_eq(const DerivPtr& d_eq,
                                     const TypeExpr& sigma,
                                     std::uint64_t guard) {
  const Term& f = d_eq->conclusion().conclusion();
  if (f.kind() != TermKind::App || f.fun().kind() != TermKind::App ||
      f.fun().fun() != eq_term(sigma, guard))
    throw ShapeMismatchError(
        "expected an equation s ==_sigma t as the first premise");
  return {f.fun().arg(), f.arg()};
}

}  // namespace

DerivPtr rep_derive(const TypeExpr& sigma, const DerivPtr& d_eq,
                    const DerivPtr& d_body, const ContextPath& context,
                    std::uint64_t guard) {
  auto [s, t] = destructure_eq(d_eq, sigma, guard);
  if (!d_eq->conclusion().same_assumptions(d_body->conclusion()))
    throw ShapeMismatchError("rep: premises differ in assumptions");
  const std::vector<Term>& A = d_body->conclusion().assumptions();
  if (!admissible(context, A))
    throw ShapeMismatchError("rep: context captures an assumption variable");

  if (sigma.is_base()) {
    // Unfold ==_B to the literal equivalence, then one BR step.
    DerivPtr d_eq2 = Derivation::lam_rule(equiv(s, t), d_eq);
    return Derivation::br(context, s, t, d_eq2, d_body);
  }

  const TypeExpr s1 = sigma.domain();
  const TypeExpr s2 = sigma.codomain();
  std::set<std::string> avoid = idents_of({&s, &t});
  for (const auto& h : A) collect_idents(h, avoid);
  VarName y = fresh_var("y_" + type_tag(s1), s1, avoid);
  avoid.insert(y.id);

  // { s == t } |- forall (\y. s y == t y), by Triv and one conversion.
  Term eq_st = d_eq->conclusion().conclusion();
  Term pointwise = eq_formula(Term::app(s, Term::var(y)),
                              Term::app(t, Term::var(y)), guard);
  Term g_body = Term::lam(y, pointwise);
  Term forall_g = Term::app(forall_term(s1, guard), g_body);
  DerivPtr d2 = Derivation::lam_rule(
      forall_g, Derivation::triv({eq_st}, eq_st));

  // Instantiate the quantifier at y.
  VarName g = fresh_var("g_" + type_tag(s1), TypeExpr::arrow(s1, TypeExpr::base()), avoid);
  avoid.insert(g.id);
  VarName z = fresh_var("z_" + type_tag(s1), s1, avoid);
  avoid.insert(z.id);
  DerivPtr d_all = all_derive(s1, g, z, guard);
  DerivPtr d3 = sub_derive(d_all, g, g_body, guard);
  DerivPtr d4 = sub_derive(d3, z, Term::var(y), guard);
  DerivPtr d5 = Derivation::lam_rule(pointwise, d4);  // {forall_g} |- s y == t y

  // Cut the quantified assumption, then the original equation. cut_derive
  // copes with the equation already sitting in A.
  DerivPtr d6 = cut_derive(weak_to(d5, with_extra({eq_st}, forall_g)),
                           {d2});  // {s == t} |- s y == t y
  DerivPtr d7 = cut_derive(weak_to(d6, with_extra(A, eq_st)),
                           {d_eq});  // A |- s y == t y

  // Eta-expand the body under the context and recurse one type lower.
  Term eta_s = Term::lam(y, Term::app(s, Term::var(y)));
  DerivPtr d8 = Derivation::lam_rule(plug(context, eta_s), d_body);
  ContextPath deeper = context;
  deeper.push_back(ContextStep::under_lam(y));
  DerivPtr d9 = rep_derive(s2, d7, d8, deeper, guard);

  return Derivation::lam_rule(plug(context, t), d9);
}

DerivPtr sub_derive(const DerivPtr& d, const VarName& x, const Term& t,
                    std::uint64_t guard) {
  if (t.type() != x.type)
    throw TypeError("sub_derive: substituted term has type " +
                    t.type().to_string() + ", variable is " +
                    x.type.to_string());

  // Reduce to empty assumptions.
  const std::vector<Term> A = d->conclusion().assumptions();
  DerivPtr cur = d;
  for (auto it = A.rbegin(); it != A.rend(); ++it)
    cur = Derivation::ded(*it, cur);
  Term u = cur->conclusion().conclusion();

  // |- top === u, via the tautology schema p === (top === p).
  Term top = top_term();
  DerivPtr d_taut = taut_schema(
      {u},
      [&](const std::vector<Term>& v) {
        return equiv(v[0], equiv(top_term(), v[0]));
      },
      guard);
  DerivPtr d_eq1 = Derivation::br({}, u, equiv(top, u), d_taut, cur);

  // |- (\x.top) t by conversion from |- top, then replace the body under
  // the binder: with no assumptions the capture of x is admissible, and
  // the single replacement turns it into (\x.u) t.
  DerivPtr d_top = std::get<DerivPtr>(taut_prove(top, guard));
  Term redex_top = Term::app(Term::lam(x, top), t);
  DerivPtr d_x = Derivation::lam_rule(redex_top, d_top);
  ContextPath into_body = {ContextStep::into_fun(t),
                           ContextStep::under_lam(x)};
  DerivPtr d_y = Derivation::br(into_body, top, u, d_eq1, d_x);

  // The redex contracts to the substituted formula.
  Term u_sub = substitute(u, x, t);
  DerivPtr d_out = Derivation::lam_rule(u_sub, d_y);

  // Restore the (substituted) assumptions.
  for (const auto& a : A) {
    Term a_sub = substitute(a, x, t);
    const Term& f = d_out->conclusion().conclusion();
    if (!f.is_imp_app() || f.imp_lhs() != a_sub)
      throw ShapeMismatchError("sub_derive: implication chain out of step");
    DerivPtr w = Derivation::weak(a_sub, d_out);
    d_out = Derivation::mp(
        w, Derivation::triv(w->conclusion().assumptions(), a_sub));
  }
  return d_out;
}

namespace {

// Detects App(forall_term(sigma), \x. body) at the top of a closed formula.
std::optional<TypeExpr> match_forall_app(const Term& s, std::uint64_t guard) {
  if (s.kind() != TermKind::App || s.arg().kind() != TermKind::Lam)
    return std::nullopt;
  TypeExpr sigma = s.arg().binder_type();
  try {
    if (s.fun() == forall_term(sigma, guard)) return sigma;
  } catch (const TooLargeError&) {
  }
  return std::nullopt;
}

// A quantifier prefix is peeled one instance at a time; beta-normalizing
// the whole quantified formula in one go duplicates subterms past any
// reasonable proof size.
ProveResult closed_prove_rec(const Term& s, std::uint64_t guard) {
  if (auto sigma = match_forall_app(s, guard)) {
    std::set<std::string> avoid;
    collect_idents(s, avoid);
    VarName inst = fresh_var("inst", *sigma, avoid);
    Term body = s.arg().open_body(inst);
    std::vector<DerivPtr> parts;
    for (const auto& a : enum_values(*sigma, guard)) {
      ProveResult r =
          closed_prove_rec(substitute(body, inst, quote(*sigma, a, guard)),
                           guard);
      if (std::holds_alternative<NotValid>(r)) return r;
      parts.push_back(std::get<DerivPtr>(r));
    }
    DerivPtr d = parts.back();
    for (size_t i = parts.size() - 1; i-- > 0;)
      d = and_intro(parts[i], d, guard);
    return Derivation::lam_rule(s, d);
  }
  Term bnf = beta_normalize(s);
  if (!is_propositional(bnf))
    throw ShapeMismatchError("closed beta-normal formula is not propositional");
  TautResult tr = taut_prove(bnf, guard);
  if (std::holds_alternative<NotTautologous>(tr))
    return NotValid{Assignment{}};
  DerivPtr d = std::get<DerivPtr>(tr);
  if (bnf != s) d = Derivation::lam_rule(s, d);
  return d;
}

}  // namespace

ProveResult closed_prove(const Term& s, std::uint64_t guard) {
  if (!s.type().is_base())
    throw TypeError("closed_prove expects a formula");
  if (!is_closed(s))
    throw NotClosedError("closed_prove: the formula has free variables");
  return closed_prove_rec(s, guard);
}

DerivPtr distrib_derive(const std::vector<std::vector<VarName>>& matrix,
                        std::uint64_t guard) {
  const size_t rows = matrix.size();
  const size_t cols = rows == 0 ? 0 : matrix[0].size();
  std::set<VarName> seen;
  for (const auto& row : matrix) {
    if (row.size() != cols)
      throw ShapeMismatchError("distrib: ragged variable matrix");
    for (const auto& v : row) {
      if (!v.type.is_base())
        throw TypeError("distrib: variables must have type B");
      if (!seen.insert(v).second)
        throw ShapeMismatchError("distrib: variables must be distinct");
    }
  }
  // |J|^|I| within the guard.
  if (cols > 0) {
    std::uint64_t count = 1;
    for (size_t i = 0; i < rows; ++i) {
      if (count > guard / cols)
        throw TooLargeError("distrib: |J|^|I| exceeds the guard");
      count *= cols;
    }
  }

  std::vector<Term> lhs_rows;
  for (const auto& row : matrix) {
    std::vector<Term> cells;
    for (const auto& v : row) cells.push_back(Term::var(v));
    lhs_rows.push_back(big_or(cells));
  }
  Term lhs = big_and(lhs_rows);

  std::vector<Term> choices;
  if (rows == 0) {
    choices.push_back(big_and({}));  // the single empty selection
  } else if (cols > 0) {
    std::vector<size_t> pick(rows, 0);
    while (true) {
      std::vector<Term> cells;
      for (size_t i = 0; i < rows; ++i)
        cells.push_back(Term::var(matrix[i][pick[i]]));
      choices.push_back(big_and(cells));
      size_t i = rows;
      bool done = true;
      while (i > 0) {
        --i;
        if (++pick[i] < cols) {
          done = false;
          break;
        }
        pick[i] = 0;
      }
      if (done) break;
    }
  }
  Term rhs = big_or(choices);

  TautResult tr = taut_prove(equiv(lhs, rhs), guard);
  if (std::holds_alternative<NotTautologous>(tr))
    throw ShapeMismatchError("distrib: equivalence unexpectedly invalid");
  return std::get<DerivPtr>(tr);
}

DerivPtr prop_rei_derive(const TypeExpr& sigma, const TypeExpr& tau,
                         const Value& a, const Value& b, std::uint64_t guard) {
  if (a.type() != TypeExpr::arrow(sigma, tau))
    throw TypeError("prop_rei: a must inhabit " +
                    TypeExpr::arrow(sigma, tau).to_string());
  if (b.type() != sigma) throw TypeError("prop_rei: b must inhabit sigma");
  Term lhs = quote(tau, apply_value(a, b), guard);
  Term rhs = Term::app(quote(TypeExpr::arrow(sigma, tau), a, guard),
                       quote(sigma, b, guard));
  Term f = eq_formula(lhs, rhs, guard);
  ProveResult r = closed_prove(f, guard);
  if (std::holds_alternative<NotValid>(r))
    throw ShapeMismatchError("prop_rei: formula unexpectedly invalid");
  return std::get<DerivPtr>(r);
}

Term enum_formula(const TypeExpr& sigma, const VarName& x,
                  std::uint64_t guard) {
  if (x.type != sigma)
    throw TypeError("enum_formula: variable type mismatch");
  std::vector<Term> disjuncts;
  for (const auto& a : enum_values(sigma, guard))
    disjuncts.push_back(
        eq_formula(quote(sigma, a, guard), Term::var(x), guard));
  return big_or(disjuncts);
}

namespace {

// Rewrites with ==_sigma equations (Rep) instead of BR.
DerivPtr rep_rewrite(const TypeExpr& sigma, const DerivPtr& d_eq,
                     DerivPtr d_body, const Term& target,
                     std::uint64_t guard) {
  auto [s, t] = destructure_eq(d_eq, sigma, guard);
  while (d_body->conclusion().conclusion() != target) {
    ContextPath c = first_diff_path(d_body->conclusion().conclusion(), target,
                                    s, t, nullptr);
    d_body = rep_derive(sigma, d_eq, d_body, c, guard);
  }
  return d_body;
}

// From A, p => c and A, ~p => c conclude A => c, through the case-split
// schema.
DerivPtr case_split_merge(const Term& p, const Term& c, const DerivPtr& d_pos,
                          const DerivPtr& d_neg, const std::vector<Term>& a) {
  DerivPtr ded_t = weak_to(Derivation::ded(p, d_pos), a);
  DerivPtr ded_f = weak_to(Derivation::ded(neg(p), d_neg), a);
  DerivPtr schema = weak_to(case_split_schema(p, c), a);
  return Derivation::mp(Derivation::mp(schema, ded_t), ded_f);
}

// Ded expects an implication conclusion on ded_t; after repair the shapes
// line up because weak_to never changes the conclusion formula.

// From A => P0 \/ ... \/ P(k-1) (right-nested) and cases[i] : A, Pi => c,
// a derivation of A => c.
DerivPtr or_elim(const DerivPtr& d_or, const std::vector<Term>& disjuncts,
                 const std::vector<DerivPtr>& cases, const Term& c) {
  const std::vector<Term>& a = d_or->conclusion().assumptions();
  if (disjuncts.empty() || cases.size() != disjuncts.size())
    throw ShapeMismatchError("or_elim: case count mismatch");

  // elim(i): A, or(P_i..) => c.
  std::function<DerivPtr(size_t)> elim = [&](size_t i) -> DerivPtr {
    if (i + 1 == disjuncts.size()) {
      // Singleton tail: the disjunction is the disjunct itself.
      std::vector<Term> want = with_extra(a, disjuncts[i]);
      return weak_to(cases[i], want);
    }
    std::vector<Term> tail(disjuncts.begin() + static_cast<long>(i) + 1,
                           disjuncts.end());
    Term t_or = big_or(tail);
    Term s_or = disj(disjuncts[i], t_or);  // (P_i -> T) -> T
    std::vector<Term> a_s = with_extra(a, s_or);

    DerivPtr d_pos = weak_to(cases[i], with_extra(a_s, disjuncts[i]));

    // Negative case: from ~P_i and the disjunction, the tail holds.
    std::vector<Term> a_neg = with_extra(a_s, neg(disjuncts[i]));
    std::vector<Term> a_neg_p = with_extra(a_neg, disjuncts[i]);
    DerivPtr bot_d =
        Derivation::mp(Derivation::triv(a_neg_p, neg(disjuncts[i])),
                       Derivation::triv(a_neg_p, disjuncts[i]));
    DerivPtr t_from_bot = Derivation::dn(Derivation::ded(
        neg(t_or), Derivation::weak(neg(t_or), bot_d)));  // A.. P_i => T
    DerivPtr imp_pt =
        weak_to(Derivation::ded(disjuncts[i], weak_to(t_from_bot, a_neg_p)),
                a_neg);  // A, S, ~P_i => P_i -> T
    DerivPtr d_t = Derivation::mp(
        Derivation::triv(a_neg, s_or), imp_pt);  // A, S, ~P_i => T
    DerivPtr rest = elim(i + 1);                 // A, or-tail => c
    DerivPtr rest_w = weak_to(rest, with_extra(a_neg, t_or));
    DerivPtr d_neg = Derivation::mp(
        weak_to(Derivation::ded(t_or, rest_w), a_neg), d_t);  // A, S, ~P_i => c

    return case_split_merge(disjuncts[i], c, d_pos, d_neg, a_s);
  };

  DerivPtr with_or = elim(0);  // A, full-or => c
  return cut_derive(with_or, {d_or});
}

// h /\ t in its literal expansion neg (disj (neg h) (neg t)).
std::optional<std::pair<Term, Term>> match_conj(const Term& t) {
  if (!t.is_imp_app() || t.imp_rhs() != Term::bot()) return std::nullopt;
  Term x = t.imp_lhs();
  if (!x.is_imp_app()) return std::nullopt;
  Term inner = x.imp_lhs();
  Term nt = x.imp_rhs();
  if (!inner.is_imp_app() || inner.imp_rhs() != nt) return std::nullopt;
  Term nh = inner.imp_lhs();
  if (!nh.is_imp_app() || nh.imp_rhs() != Term::bot()) return std::nullopt;
  if (!nt.is_imp_app() || nt.imp_rhs() != Term::bot()) return std::nullopt;
  return std::make_pair(nh.imp_lhs(), nt.imp_lhs());
}

// From A => the right-nested conjunction, its i-th conjunct. The two
// binary projections are fixed-size derivations over the literal
// expansion (neg (neg h \/ neg t)).
DerivPtr and_elim_pair(const DerivPtr& d, bool right) {
  const Term& w = d->conclusion().conclusion();
  auto a_pair = match_conj(w);
  if (!a_pair) throw ShapeMismatchError("and_elim: not a conjunction");
  auto [h, t] = *a_pair;
  const std::vector<Term>& a = d->conclusion().assumptions();
  Term nh = neg(h), nt = neg(t);
  Term x_or = disj(nh, nt);  // (~h -> ~t) -> ~t
  Term step = Term::imp(nh, nt);
  Term target = right ? t : h;
  Term ntarget = neg(target);

  std::vector<Term> b1 = with_extra(with_extra(a, w), ntarget);
  std::vector<Term> b2 = with_extra(b1, step);
  DerivPtr inner;
  if (right) {
    inner = Derivation::triv(b2, ntarget);  // ~t
  } else {
    inner = Derivation::mp(Derivation::triv(b2, step),
                           Derivation::triv(b2, ntarget));  // ~t
  }
  DerivPtr d_x = weak_to(Derivation::ded(step, inner), b1);   // X
  DerivPtr d_bot = Derivation::mp(Derivation::triv(b1, w), d_x);
  DerivPtr d_dn = Derivation::dn(
      weak_to(Derivation::ded(ntarget, d_bot), with_extra(a, w)));
  DerivPtr d_proj = weak_to(d_dn, with_extra(a, w));  // A, h/\t => target
  return cut_derive(d_proj, {d});
}

DerivPtr and_elim(const DerivPtr& d, size_t count, size_t i) {
  DerivPtr cur = d;
  for (size_t k = 0; k < i; ++k) cur = and_elim_pair(cur, true);
  if (i + 1 < count) cur = and_elim_pair(cur, false);
  return cur;
}

// From A => disjunct_i, the right-nested disjunction of all of them.
DerivPtr or_intro(const std::vector<Term>& disjuncts, size_t i,
                  const DerivPtr& d) {
  const std::vector<Term>& a = d->conclusion().assumptions();
  if (disjuncts.size() == 1) return d;
  std::vector<Term> tail(disjuncts.begin() + 1, disjuncts.end());
  Term t_or = big_or(tail);
  Term whole = disj(disjuncts[0], t_or);  // (P_0 -> T) -> T
  if (i == 0) {
    Term step = Term::imp(disjuncts[0], t_or);
    std::vector<Term> b = with_extra(with_extra(a, disjuncts[0]), step);
    DerivPtr t3 = Derivation::mp(Derivation::triv(b, step),
                                 Derivation::triv(b, disjuncts[0]));
    DerivPtr t4 = weak_to(Derivation::ded(step, t3),
                          with_extra(a, disjuncts[0]));  // A,P0 => whole
    return cut_derive(t4, {d});
  }
  DerivPtr d_tail = or_intro(tail, i - 1, d);  // A => T
  Term step = Term::imp(disjuncts[0], t_or);
  std::vector<Term> b = with_extra(with_extra(a, t_or), step);
  DerivPtr t1 = Derivation::triv(b, t_or);
  DerivPtr t2 = weak_to(Derivation::ded(step, t1), with_extra(a, t_or));
  return cut_derive(t2, {d_tail});
}

}  // namespace

namespace {

// enum_derive and all_derive are pure functions of their arguments and are
// rebuilt many times with identical arguments when a corpus of formulas is
// proved; a process-wide memo keeps that linear.
class DerivMemo {
 public:
  DerivPtr get_or_build(const std::string& key,
                        const std::function<DerivPtr()>& build) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = map_.find(key);
      if (it != map_.end()) return it->second;
    }
    DerivPtr d = build();
    std::lock_guard<std::mutex> lock(mu_);
    return map_.emplace(key, d).first->second;
  }

 private:
  std::mutex mu_;
  std::map<std::string, DerivPtr> map_;
};

DerivMemo& deriv_memo() {
  static DerivMemo memo;
  return memo;
}

DerivPtr enum_derive_impl(const TypeExpr& sigma, const VarName& x,
                          std::uint64_t guard);
DerivPtr all_derive_impl(const TypeExpr& sigma, const VarName& f,
                         const VarName& x, std::uint64_t guard);

}  // namespace

DerivPtr enum_derive(const TypeExpr& sigma, const VarName& x,
                     std::uint64_t guard) {
  if (x.type != sigma) throw TypeError("enum_derive: variable type mismatch");
  std::string key = "enum|" + sigma.to_string() + "|" + x.id + "|" +
                    std::to_string(guard);
  return deriv_memo().get_or_build(
      key, [&] { return enum_derive_impl(sigma, x, guard); });
}

namespace {

DerivPtr enum_derive_impl(const TypeExpr& sigma, const VarName& x,
                          std::uint64_t guard) {
  Term target = enum_formula(sigma, x, guard);

  if (sigma.is_base()) {
    Term bnf = beta_normalize(target);
    TautResult tr = taut_prove(bnf, guard);
    if (std::holds_alternative<NotTautologous>(tr))
      throw ShapeMismatchError("enum: base case unexpectedly not tautologous");
    return Derivation::lam_rule(target, std::get<DerivPtr>(tr));
  }

  const TypeExpr s1 = sigma.domain();
  const TypeExpr s2 = sigma.codomain();
  const std::vector<Value> dom1 = enum_values(s1, guard);
  const std::vector<Value> dom2 = enum_values(s2, guard);
  const std::vector<Value> domS = enum_values(sigma, guard);

  std::set<std::string> avoid = {x.id};
  VarName z = fresh_var("z_" + type_tag(s2), s2, avoid);
  avoid.insert(z.id);

  auto m_term = [&](const Value& b, const Value& c) {
    return eq_formula(quote(s2, c, guard),
                      Term::app(Term::var(x), quote(s1, b, guard)), guard);
  };

  // Induction hypothesis instantiated at x (quote b), for every b.
  DerivPtr ih = enum_derive(s2, z, guard);
  std::vector<DerivPtr> per_b;
  for (const auto& b : dom1)
    per_b.push_back(sub_derive(
        ih, z, Term::app(Term::var(x), quote(s1, b, guard)), guard));

  // The per-row disjunctions distribute into a disjunction over the whole
  // function space: a nested case analysis whose leaves fix one codomain
  // value per argument, i.e. one table. Inside a leaf the reification
  // equation rewrites each conjunct once, then the rewritten conjunction
  // is injected into the target disjunction.
  auto rewritten = [&](const Value& a, const Value& b) {
    return eq_formula(
        Term::app(quote(sigma, a, guard), quote(s1, b, guard)),
        Term::app(Term::var(x), quote(s1, b, guard)), guard);
  };
  std::vector<Term> big_disjuncts;
  for (const auto& a : domS) {
    std::vector<Term> conjuncts;
    for (const auto& b : dom1) conjuncts.push_back(rewritten(a, b));
    big_disjuncts.push_back(big_and(conjuncts));
  }
  Term r_form = big_or(big_disjuncts);

  // Table index of the leaf that picked codomain value js[b] per b.
  auto table_index = [&](const std::vector<size_t>& js) {
    std::uint64_t idx = 0;
    for (size_t b = 0; b < js.size(); ++b)
      idx = idx * dom2.size() + js[b];
    return static_cast<size_t>(idx);
  };

  std::vector<size_t> picks;
  std::function<DerivPtr(size_t, const std::vector<Term>&)> analyse =
      [&](size_t b, const std::vector<Term>& hyps) -> DerivPtr {
    if (b == dom1.size()) {
      size_t ai = table_index(picks);
      const Value& a = domS[ai];
      std::vector<DerivPtr> parts;
      for (size_t bi = 0; bi < dom1.size(); ++bi) {
        DerivPtr d_m = Derivation::triv(hyps, m_term(dom1[bi], dom2[picks[bi]]));
        DerivPtr d_rei = weak_to(
            prop_rei_derive(s1, s2, a, dom1[bi], guard), hyps);
        parts.push_back(
            rep_rewrite(s2, d_rei, d_m, rewritten(a, dom1[bi]), guard));
      }
      DerivPtr d_conj = parts.back();
      for (size_t i = parts.size() - 1; i-- > 0;)
        d_conj = and_intro(parts[i], d_conj, guard);
      return or_intro(big_disjuncts, ai, d_conj);
    }
    std::vector<Term> row;
    for (const auto& c : dom2) row.push_back(m_term(dom1[b], c));
    std::vector<DerivPtr> cases;
    for (size_t j = 0; j < dom2.size(); ++j) {
      picks.push_back(j);
      cases.push_back(analyse(b + 1, with_extra(hyps, row[j])));
      picks.pop_back();
    }
    return or_elim(weak_to(per_b[b], hyps), row, cases, r_form);
  };

  DerivPtr d_r = analyse(0, {});
  return Derivation::lam_rule(target, d_r);
}

}  // namespace

DerivPtr all_derive(const TypeExpr& sigma, const VarName& f, const VarName& x,
                    std::uint64_t guard) {
  if (f.type != TypeExpr::arrow(sigma, TypeExpr::base()))
    throw TypeError("all_derive: f must have type " +
                    TypeExpr::arrow(sigma, TypeExpr::base()).to_string());
  if (x.type != sigma) throw TypeError("all_derive: x must inhabit sigma");
  std::string key = "all|" + sigma.to_string() + "|" + f.id + "|" + x.id +
                    "|" + std::to_string(guard);
  return deriv_memo().get_or_build(
      key, [&] { return all_derive_impl(sigma, f, x, guard); });
}

namespace {

DerivPtr all_derive_impl(const TypeExpr& sigma, const VarName& f,
                         const VarName& x, std::uint64_t guard) {
  Term fa = Term::app(forall_term(sigma, guard), Term::var(f));
  Term fx = Term::app(Term::var(f), Term::var(x));
  const std::vector<Value> dom = enum_values(sigma, guard);

  std::vector<Term> conj_parts;
  for (const auto& b : dom)
    conj_parts.push_back(Term::app(Term::var(f), quote(sigma, b, guard)));
  Term conj_all = big_and(conj_parts);

  std::vector<DerivPtr> per_a;
  std::vector<Term> p_terms;
  for (size_t i = 0; i < dom.size(); ++i) {
    Term qa = quote(sigma, dom[i], guard);
    Term pa = eq_formula(qa, Term::var(x), guard);
    p_terms.push_back(pa);
    DerivPtr d_t = Derivation::ded(
        conj_all,
        and_elim(Derivation::triv({conj_all}, conj_all), dom.size(), i));
    DerivPtr d_l =
        Derivation::lam_rule(Term::imp(fa, conj_parts[i]), d_t);
    DerivPtr d_w = Derivation::weak(pa, d_l);
    DerivPtr d_triv = Derivation::triv({pa}, pa);
    DerivPtr d_rep = rep_rewrite(sigma, d_triv, d_w, Term::imp(fa, fx), guard);
    per_a.push_back(Derivation::ded(pa, d_rep));
  }

  // Case analysis over the enumeration disjunction: each disjunct's
  // implication discharges into its case.
  Term fa_fx = Term::imp(fa, fx);
  std::vector<DerivPtr> cases;
  for (size_t i = 0; i < per_a.size(); ++i) {
    DerivPtr w = Derivation::weak(p_terms[i], per_a[i]);
    cases.push_back(Derivation::mp(
        w, Derivation::triv(w->conclusion().assumptions(), p_terms[i])));
  }
  DerivPtr d_enum = enum_derive(sigma, x, guard);
  DerivPtr d_mp2 = or_elim(d_enum, p_terms, cases, fa_fx);

  DerivPtr d_weak = Derivation::weak(fa, d_mp2);
  return Derivation::mp(d_weak, Derivation::triv({fa}, fa));
}

}  // namespace

ProveResult prove(const Term& s, std::uint64_t guard) {
  if (!s.type().is_base()) throw TypeError("prove expects a formula");
  auto cm = countermodel(s, guard);
  if (cm) return NotValid{*cm};

  std::set<VarName> fv = free_vars(s);
  std::vector<VarName> vars(fv.begin(), fv.end());

  // Close over the free variables in canonical order.
  std::vector<Term> bodies(vars.size() + 1, s);
  for (size_t i = vars.size(); i-- > 0;)
    bodies[i] = Term::app(forall_term(vars[i].type, guard),
                          Term::lam(vars[i], bodies[i + 1]));

  ProveResult closed = closed_prove(bodies[0], guard);
  if (std::holds_alternative<NotValid>(closed))
    throw ShapeMismatchError("prove: closure unexpectedly invalid");
  DerivPtr d = std::get<DerivPtr>(closed);

  std::set<std::string> avoid;
  collect_idents(s, avoid);
  for (const auto& v : vars) avoid.insert(v.id);

  for (size_t i = 0; i < vars.size(); ++i) {
    const TypeExpr& si = vars[i].type;
    Term g_body = Term::lam(vars[i], bodies[i + 1]);
    VarName g = fresh_var("g_" + type_tag(si), TypeExpr::arrow(si, TypeExpr::base()), avoid);
    std::set<std::string> avoid_g = avoid;
    avoid_g.insert(g.id);
    VarName z = fresh_var("z_" + type_tag(si), si, avoid_g);
    DerivPtr da = all_derive(si, g, z, guard);
    DerivPtr db = sub_derive(da, g, g_body, guard);
    DerivPtr dc = sub_derive(db, z, Term::var(vars[i]), guard);
    DerivPtr dd = Derivation::lam_rule(bodies[i + 1], dc);
    d = Derivation::mp(Derivation::ded(bodies[i], dd), d);
  }

  if (auto err = check(*d))
    throw ShapeMismatchError("prove: output failed re-checking: " +
                             err->to_string());
  return d;
}

}  // namespace ptt
