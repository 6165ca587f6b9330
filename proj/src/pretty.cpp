#include "ptt/pretty.hpp"

#include <map>

#include "ptt/quote.hpp"

namespace ptt {

namespace {

// Precedence levels, mirroring the grammar: a term printed for level L must
// be parseable by the grammar nonterminal at that level.
constexpr int kLam = 0;   // \x:T. ...  and  forall x:T. ...
constexpr int kIff = 1;   // <=>  (right-assoc)
constexpr int kImp = 2;   // =>   (right-assoc)
constexpr int kOr = 3;    // \/   (right-assoc)
constexpr int kAnd = 4;   // /\   (right-assoc)
constexpr int kNot = 5;   // ~
constexpr int kEq = 6;    // ==   (left-assoc)
constexpr int kApp = 7;   // juxtaposition (left-assoc)
constexpr int kAtom = 8;

std::optional<Term> match_neg(const Term& t) {
  if (t.is_imp_app() && t.imp_rhs() == Term::bot()) return t.imp_lhs();
  return std::nullopt;
}

std::optional<std::pair<Term, Term>> match_or(const Term& t) {
  if (!t.is_imp_app()) return std::nullopt;
  Term inner = t.imp_lhs();
  if (!inner.is_imp_app()) return std::nullopt;
  if (inner.imp_rhs() != t.imp_rhs()) return std::nullopt;
  return std::make_pair(inner.imp_lhs(), inner.imp_rhs());
}

std::optional<std::pair<Term, Term>> match_and(const Term& t) {
  auto n = match_neg(t);
  if (!n) return std::nullopt;
  auto o = match_or(*n);
  if (!o) return std::nullopt;
  auto na = match_neg(o->first), nb = match_neg(o->second);
  if (!na || !nb) return std::nullopt;
  return std::make_pair(*na, *nb);
}

std::optional<std::pair<Term, Term>> match_equiv(const Term& t) {
  auto a = match_and(t);
  if (!a) return std::nullopt;
  const Term& p = a->first;
  const Term& q = a->second;
  if (!p.is_imp_app() || !q.is_imp_app()) return std::nullopt;
  if (p.imp_lhs() != q.imp_rhs() || p.imp_rhs() != q.imp_lhs())
    return std::nullopt;
  return std::make_pair(p.imp_lhs(), p.imp_rhs());
}

// t == app(app(eq_term(s), a), b) for s = a's type.
std::optional<std::pair<Term, Term>> match_eq_formula(const Term& t) {
  if (t.kind() != TermKind::App) return std::nullopt;
  Term inner = t.fun();
  if (inner.kind() != TermKind::App) return std::nullopt;
  Term head = inner.fun();
  if (head.kind() != TermKind::Lam) return std::nullopt;
  const TypeExpr& a_type = inner.arg().type();
  try {
    if (head == eq_term(a_type))
      return std::make_pair(inner.arg(), t.arg());
  } catch (const TooLargeError&) {
  }
  return std::nullopt;
}

// t == app(forall_term(s), \x. body).
bool match_forall(const Term& t) {
  if (t.kind() != TermKind::App || t.arg().kind() != TermKind::Lam)
    return false;
  Term head = t.fun();
  if (head.kind() != TermKind::Lam) return false;
  try {
    return head == forall_term(t.arg().binder_type());
  } catch (const TooLargeError&) {
    return false;
  }
}

struct TermPrinter {
  bool sugar;
  std::set<std::string> forbidden;  // free identifiers of the whole term
  std::vector<std::pair<VarName, std::string>> stack;  // binder names

  std::string pick_name(const TypeExpr&) const {
    auto taken = [&](const std::string& id) {
      if (forbidden.count(id)) return true;
      for (const auto& [v, n] : stack)
        if (n == id) return true;
      return false;
    };
    if (!taken("x")) return "x";
    for (int k = 1;; ++k) {
      std::string cand = "x" + std::to_string(k);
      if (!taken(cand)) return cand;
    }
  }

  std::string wrap(const std::string& s, int have, int need) const {
    if (have < need) return "(" + s + ")";
    return s;
  }

  std::string binder(const Term& lam_term, const char* intro, int level) {
    TypeExpr ty = lam_term.binder_type();
    std::string name = pick_name(ty);
    VarName v(name, ty);
    stack.emplace_back(v, name);
    std::string body = go(lam_term.open_body(v), kLam);
    stack.pop_back();
    std::string out =
        std::string(intro) + name + ":" + ty.to_string() + ". " + body;
    return wrap(out, kLam, level);
  }

  std::string go(const Term& t, int level) {
    switch (t.kind()) {
      case TermKind::Bot:
        return "bot";
      case TermKind::Imp:
        return "imp";
      case TermKind::FreeVar:
        return t.var_name().id;
      case TermKind::BoundVar: {
        size_t i = stack.size() - 1 - static_cast<size_t>(t.bound_index());
        return stack[i].second;
      }
      case TermKind::Lam:
        return binder(t, "\\", level);
      case TermKind::App: {
        if (sugar) {
          if (t == top_term()) return "top";
          if (match_forall(t)) {
            Term lam_part = t.arg();
            TypeExpr ty = lam_part.binder_type();
            std::string name = pick_name(ty);
            VarName v(name, ty);
            stack.emplace_back(v, name);
            std::string body = go(lam_part.open_body(v), kLam);
            stack.pop_back();
            return wrap("forall " + name + ":" + ty.to_string() + ". " + body,
                        kLam, level);
          }
          if (auto e = match_equiv(t))
            return wrap(go(e->first, kIff + 1) + " <=> " + go(e->second, kIff),
                        kIff, level);
          if (auto a = match_and(t))
            return wrap(go(a->first, kAnd + 1) + " /\\ " + go(a->second, kAnd),
                        kAnd, level);
          if (auto o = match_or(t))
            return wrap(go(o->first, kOr + 1) + " \\/ " + go(o->second, kOr),
                        kOr, level);
          if (auto n = match_neg(t)) {
            // "== binds tighter than ~" is rendered explicitly.
            if (match_eq_formula(*n))
              return wrap("~(" + go(*n, kLam) + ")", kNot, level);
            return wrap("~" + go(*n, kNot), kNot, level);
          }
          if (auto q = match_eq_formula(t))
            return wrap(go(q->first, kEq) + " == " + go(q->second, kEq + 1),
                        kEq, level);
        }
        if (t.is_imp_app())
          return wrap(
              go(t.imp_lhs(), kImp + 1) + " => " + go(t.imp_rhs(), kImp), kImp,
              level);
        return wrap(go(t.fun(), kApp) + " " + go(t.arg(), kAtom), kApp, level);
      }
    }
    return "?";
  }
};

std::string print_term(const Term& t, bool sugar) {
  TermPrinter p;
  p.sugar = sugar;
  collect_idents(t, p.forbidden);
  return p.go(t, kLam);
}

std::string print_term_in_scope(const Term& t, bool sugar,
                                const std::set<std::string>& outer) {
  TermPrinter p;
  p.sugar = sugar;
  p.forbidden = outer;
  collect_idents(t, p.forbidden);
  return p.go(t, kLam);
}

}  // namespace

std::string pretty(const TypeExpr& type) { return type.to_string(); }

std::string pretty(const Term& term, const PrintOptions& opts) {
  return print_term(term, opts.sugar);
}

std::string pretty(const Sequent& sequent, const PrintOptions& opts) {
  std::string out;
  for (size_t i = 0; i < sequent.assumptions().size(); ++i) {
    if (i) out += ", ";
    out += print_term(sequent.assumptions()[i], opts.sugar);
  }
  if (!sequent.assumptions().empty()) out += " ";
  out += "|- " + print_term(sequent.conclusion(), opts.sugar);
  return out;
}

std::string pretty(const Value& value) { return value.to_string(); }

namespace {

// Proof files are always printed desugared so that golden files and
// determinism checks do not depend on sugar recognition.
std::string proof_term(const Term& t) { return print_term(t, false); }

// Sibling and equation terms inside a context path may mention the path's
// own binders; those identifiers must survive printing untouched, so they
// are added to the printer's forbidden set.
std::string proof_term_under(const Term& t,
                             const std::set<std::string>& binders) {
  return print_term_in_scope(t, false, binders);
}

void print_deriv_rec(const Derivation& d, int indent, std::string& out) {
  std::string pad(static_cast<size_t>(indent), ' ');
  switch (d.rule()) {
    case Rule::Triv: {
      out += pad + "(triv (";
      const auto& as = d.conclusion().assumptions();
      for (size_t i = 0; i < as.size(); ++i) {
        if (i) out += ", ";
        out += proof_term(as[i]);
      }
      out += ") " + proof_term(d.conclusion().conclusion()) + ")";
      return;
    }
    case Rule::Weak:
      out += pad + "(weak " + proof_term(*d.weak_added()) + "\n";
      break;
    case Rule::Ded:
      out += pad + "(ded " + proof_term(*d.ded_discharged()) + "\n";
      break;
    case Rule::MP:
      out += pad + "(mp\n";
      break;
    case Rule::DN:
      out += pad + "(dn\n";
      break;
    case Rule::Lam:
      out += pad + "(lam " + proof_term(d.conclusion().conclusion()) + "\n";
      break;
    case Rule::BR: {
      const auto& br = *d.br_payload();
      out += pad + "(br (";
      std::set<std::string> binders;
      bool first = true;
      for (const auto& step : br.context) {
        if (!first) out += " ";
        first = false;
        switch (step.kind) {
          case ContextStep::Kind::UnderLam:
            out += "(underlam " + step.binder->id + " : " +
                   step.binder->type.to_string() + ")";
            binders.insert(step.binder->id);
            break;
          case ContextStep::Kind::IntoFun:
            out += "(intofun " + proof_term_under(*step.sibling, binders) + ")";
            break;
          case ContextStep::Kind::IntoArg:
            out += "(intoarg " + proof_term_under(*step.sibling, binders) + ")";
            break;
        }
      }
      out += ") (" + proof_term_under(br.lhs, binders) + ") (" +
             proof_term_under(br.rhs, binders) + ")\n";
      break;
    }
  }
  for (size_t i = 0; i < d.premises().size(); ++i) {
    print_deriv_rec(*d.premises()[i], indent + 2, out);
    if (i + 1 < d.premises().size()) out += "\n";
  }
  out += ")";
}

void add_decl(std::map<std::string, TypeExpr>& decls, const VarName& v) {
  auto it = decls.find(v.id);
  if (it == decls.end()) {
    decls.emplace(v.id, v.type);
  } else if (it->second != v.type) {
    throw PttError("cannot serialize: identifier '" + v.id +
                   "' occurs free at two different types");
  }
}

void add_term_decls(std::map<std::string, TypeExpr>& decls, const Term& t,
                    const std::set<std::string>& skip = {}) {
  for (const auto& v : free_vars(t)) {
    if (skip.count(v.id)) continue;
    add_decl(decls, v);
  }
}

void collect_deriv_decls(const Derivation& d,
                         std::map<std::string, TypeExpr>& decls) {
  for (const auto& a : d.conclusion().assumptions()) add_term_decls(decls, a);
  add_term_decls(decls, d.conclusion().conclusion());
  if (d.weak_added()) add_term_decls(decls, *d.weak_added());
  if (d.ded_discharged()) add_term_decls(decls, *d.ded_discharged());
  if (d.br_payload()) {
    const auto& br = *d.br_payload();
    // A term under the path parses with the preceding underlam binders in
    // scope (innermost wins by identifier). A variable spelled like such a
    // binder but typed differently cannot round-trip.
    auto add_scoped = [&](const Term& t, const std::vector<VarName>& scope) {
      for (const auto& v : free_vars(t)) {
        const VarName* hit = nullptr;
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
          if (it->id == v.id) {
            hit = &*it;
            break;
          }
        if (!hit) {
          add_decl(decls, v);
        } else if (*hit != v) {
          throw PttError("cannot serialize: variable '" + v.id +
                         "' collides with a path binder of a different type");
        }
      }
    };
    std::vector<VarName> preceding;
    for (const auto& step : br.context) {
      if (step.kind == ContextStep::Kind::UnderLam)
        preceding.push_back(*step.binder);
      else
        add_scoped(*step.sibling, preceding);
    }
    add_scoped(br.lhs, preceding);
    add_scoped(br.rhs, preceding);
  }
  for (const auto& p : d.premises()) collect_deriv_decls(*p, decls);
}

std::string render_decls(const std::map<std::string, TypeExpr>& decls) {
  std::string out;
  for (const auto& [id, ty] : decls)
    out += "var " + id + " : " + ty.to_string() + ".\n";
  return out;
}

}  // namespace

std::string pretty(const Derivation& d) {
  std::string out;
  print_deriv_rec(d, 0, out);
  return out;
}

std::string render_term_file(const Term& t, const PrintOptions& opts) {
  std::map<std::string, TypeExpr> decls;
  add_term_decls(decls, t);
  return render_decls(decls) + pretty(t, opts) + "\n";
}

std::string render_sequent_file(const Sequent& q, const PrintOptions& opts) {
  std::map<std::string, TypeExpr> decls;
  for (const auto& a : q.assumptions()) add_term_decls(decls, a);
  add_term_decls(decls, q.conclusion());
  return render_decls(decls) + pretty(q, opts) + "\n";
}

std::string render_derivation_file(const Derivation& d) {
  std::map<std::string, TypeExpr> decls;
  collect_deriv_decls(d, decls);
  return render_decls(decls) + pretty(d) + "\n";
}

}  // namespace ptt
