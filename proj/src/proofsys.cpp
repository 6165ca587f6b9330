#include "ptt/proofsys.hpp"

#include <algorithm>
#include <unordered_set>

#include "ptt/quote.hpp"

namespace ptt {

namespace {

bool term_less(const Term& a, const Term& b) {
  return Term::compare(a, b) < 0;
}

void require_formula(const Term& s, const char* what) {
  if (!s.type().is_base())
    throw TypeError(std::string(what) + " must have type B, got " +
                    s.type().to_string());
}

}  // namespace

Sequent::Sequent(std::vector<Term> assumptions, Term conclusion)
    : assumptions_(std::move(assumptions)), conclusion_(std::move(conclusion)) {
  require_formula(conclusion_, "sequent conclusion");
  for (const auto& a : assumptions_) require_formula(a, "sequent assumption");
  std::sort(assumptions_.begin(), assumptions_.end(), term_less);
  assumptions_.erase(std::unique(assumptions_.begin(), assumptions_.end()),
                     assumptions_.end());
}

bool Sequent::contains(const Term& s) const {
  return std::binary_search(assumptions_.begin(), assumptions_.end(), s,
                            term_less);
}

Sequent Sequent::with(const Term& s) const {
  std::vector<Term> a = assumptions_;
  a.push_back(s);
  return Sequent(std::move(a), conclusion_);
}

Sequent Sequent::without(const Term& s) const {
  std::vector<Term> a;
  a.reserve(assumptions_.size());
  for (const auto& t : assumptions_)
    if (t != s) a.push_back(t);
  return Sequent(std::move(a), conclusion_);
}

Sequent Sequent::but(const Term& c) const { return Sequent(assumptions_, c); }

bool Sequent::operator==(const Sequent& o) const {
  return conclusion_ == o.conclusion_ && same_assumptions(o);
}

bool Sequent::same_assumptions(const Sequent& o) const {
  return assumptions_ == o.assumptions_;
}

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::Triv: return "triv";
    case Rule::Weak: return "weak";
    case Rule::Ded: return "ded";
    case Rule::MP: return "mp";
    case Rule::DN: return "dn";
    case Rule::Lam: return "lam";
    case Rule::BR: return "br";
  }
  return "?";
}

// -- smart constructors -------------------------------------------------

DerivPtr Derivation::triv(const std::vector<Term>& assumptions,
                          const Term& s) {
  Sequent concl(assumptions, s);
  if (!concl.contains(s))
    throw ShapeMismatchError("triv: conclusion not among the assumptions");
  return DerivPtr(new Derivation(Rule::Triv, std::move(concl), {}));
}

DerivPtr Derivation::weak(const Term& s, const DerivPtr& d) {
  auto node = new Derivation(Rule::Weak, d->conclusion().with(s), {d});
  node->weak_added_ = s;
  return DerivPtr(node);
}

DerivPtr Derivation::ded(const Term& s, const DerivPtr& d) {
  if (!d->conclusion().contains(s))
    throw ShapeMismatchError("ded: discharged formula not among assumptions");
  Sequent concl = d->conclusion().without(s).but(
      Term::imp(s, d->conclusion().conclusion()));
  auto node = new Derivation(Rule::Ded, std::move(concl), {d});
  node->ded_discharged_ = s;
  return DerivPtr(node);
}

DerivPtr Derivation::mp(const DerivPtr& d_imp, const DerivPtr& d_arg) {
  const Term& f = d_imp->conclusion().conclusion();
  if (!f.is_imp_app())
    throw ShapeMismatchError("mp: first premise is not an implication");
  if (f.imp_lhs() != d_arg->conclusion().conclusion())
    throw ShapeMismatchError("mp: second premise does not match antecedent");
  if (!d_imp->conclusion().same_assumptions(d_arg->conclusion()))
    throw ShapeMismatchError("mp: premises have different assumptions");
  Sequent concl = d_imp->conclusion().but(f.imp_rhs());
  return DerivPtr(new Derivation(Rule::MP, std::move(concl), {d_imp, d_arg}));
}

DerivPtr Derivation::dn(const DerivPtr& d) {
  const Term& f = d->conclusion().conclusion();
  if (!f.is_imp_app() || f.imp_rhs() != Term::bot() ||
      !f.imp_lhs().is_imp_app() || f.imp_lhs().imp_rhs() != Term::bot())
    throw ShapeMismatchError("dn: premise is not a double negation");
  Sequent concl = d->conclusion().but(f.imp_lhs().imp_lhs());
  return DerivPtr(new Derivation(Rule::DN, std::move(concl), {d}));
}

DerivPtr Derivation::lam_rule(const Term& target, const DerivPtr& d) {
  require_formula(target, "lam target");
  Sequent concl = d->conclusion().but(target);
  return DerivPtr(new Derivation(Rule::Lam, std::move(concl), {d}));
}

DerivPtr Derivation::br(const ContextPath& context, const Term& s,
                        const Term& t, const DerivPtr& d_eq,
                        const DerivPtr& d_body) {
  if (s.type() != t.type())
    throw ShapeMismatchError("br: equation sides differ in type");
  if (d_eq->conclusion().conclusion() != equiv(s, t))
    throw ShapeMismatchError(
        "br: first premise is not the equation s === t (literal expansion)");
  if (!d_eq->conclusion().same_assumptions(d_body->conclusion()))
    throw ShapeMismatchError("br: premises have different assumptions");
  if (d_body->conclusion().conclusion() != plug(context, s))
    throw ShapeMismatchError("br: second premise is not C[s]");
  if (!admissible(context, d_body->conclusion().assumptions()))
    throw ShapeMismatchError("br: context captures an assumption variable");
  Sequent concl = d_body->conclusion().but(plug(context, t));
  auto node = new Derivation(Rule::BR, std::move(concl), {d_eq, d_body});
  node->br_ = BrPayload{context, s, t};
  return DerivPtr(node);
}

DerivPtr Derivation::raw(Rule rule, Sequent conclusion,
                         std::vector<DerivPtr> premises,
                         std::optional<Term> weak_added,
                         std::optional<Term> ded_discharged,
                         std::optional<BrPayload> br) {
  auto node = new Derivation(rule, std::move(conclusion), std::move(premises));
  node->weak_added_ = std::move(weak_added);
  node->ded_discharged_ = std::move(ded_discharged);
  node->br_ = std::move(br);
  return DerivPtr(node);
}

bool Derivation::operator==(const Derivation& o) const {
  if (rule_ != o.rule_ || conclusion_ != o.conclusion_) return false;
  if (premises_.size() != o.premises_.size()) return false;
  if (weak_added_.has_value() != o.weak_added_.has_value()) return false;
  if (weak_added_ && *weak_added_ != *o.weak_added_) return false;
  if (ded_discharged_.has_value() != o.ded_discharged_.has_value())
    return false;
  if (ded_discharged_ && *ded_discharged_ != *o.ded_discharged_) return false;
  if (br_.has_value() != o.br_.has_value()) return false;
  if (br_) {
    if (br_->lhs != o.br_->lhs || br_->rhs != o.br_->rhs) return false;
    if (br_->context != o.br_->context) return false;
  }
  for (size_t i = 0; i < premises_.size(); ++i)
    if (*premises_[i] != *o.premises_[i]) return false;
  return true;
}

std::size_t Derivation::tree_size() const {
  std::size_t n = 1;
  for (const auto& p : premises_) n += p->tree_size();
  return n;
}

// -- checker --------------------------------------------------------------

std::string check_code_name(CheckCode c) {
  switch (c) {
    case CheckCode::ArityMismatch: return "ArityMismatch";
    case CheckCode::NotInAssumptions: return "NotInAssumptions";
    case CheckCode::RuleMismatch: return "RuleMismatch";
    case CheckCode::NotLambdaEquivalent: return "NotLambdaEquivalent";
    case CheckCode::AdmissibilityViolation: return "AdmissibilityViolation";
    case CheckCode::IllTyped: return "IllTyped";
  }
  return "?";
}

std::string CheckError::to_string() const {
  std::string out = "at node [";
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) out += ".";
    out += std::to_string(path[i]);
  }
  out += "]: " + check_code_name(code) + ": " + message;
  return out;
}

namespace {

std::optional<CheckError> fail(std::vector<int> path, CheckCode code,
                               std::string msg) {
  return CheckError{std::move(path), code, std::move(msg)};
}

std::optional<CheckError> check_node(const Derivation& d,
                                     std::vector<int>& path) {
  const Sequent& c = d.conclusion();
  const auto& ps = d.premises();
  auto arity = [&](size_t n) -> std::optional<CheckError> {
    if (ps.size() != n)
      return fail(path, CheckCode::ArityMismatch,
                  rule_name(d.rule()) + " expects " + std::to_string(n) +
                      " premises, has " + std::to_string(ps.size()));
    return std::nullopt;
  };
  switch (d.rule()) {
    case Rule::Triv: {
      if (auto e = arity(0)) return e;
      if (!c.contains(c.conclusion()))
        return fail(path, CheckCode::NotInAssumptions,
                    "triv conclusion is not among the assumptions");
      return std::nullopt;
    }
    case Rule::Weak: {
      if (auto e = arity(1)) return e;
      if (!d.weak_added())
        return fail(path, CheckCode::RuleMismatch, "weak without payload");
      const Sequent& p = ps[0]->conclusion();
      if (c.conclusion() != p.conclusion())
        return fail(path, CheckCode::RuleMismatch,
                    "weak changes the conclusion formula");
      if (c != p.with(*d.weak_added()))
        return fail(path, CheckCode::RuleMismatch,
                    "weak conclusion is not premise plus the added formula");
      return std::nullopt;
    }
    case Rule::Ded: {
      if (auto e = arity(1)) return e;
      const Sequent& p = ps[0]->conclusion();
      const Term& f = c.conclusion();
      if (!f.is_imp_app())
        return fail(path, CheckCode::RuleMismatch,
                    "ded conclusion is not an implication");
      Term s = f.imp_lhs(), t = f.imp_rhs();
      if (t != p.conclusion())
        return fail(path, CheckCode::RuleMismatch,
                    "ded consequent differs from premise conclusion");
      if (Sequent(c.assumptions(), t).with(s) != p)
        return fail(path, CheckCode::RuleMismatch,
                    "ded premise assumptions are not A plus the antecedent");
      return std::nullopt;
    }
    case Rule::MP: {
      if (auto e = arity(2)) return e;
      const Sequent& p1 = ps[0]->conclusion();
      const Sequent& p2 = ps[1]->conclusion();
      if (!p1.conclusion().is_imp_app())
        return fail(path, CheckCode::RuleMismatch,
                    "mp first premise is not an implication");
      if (p1.conclusion().imp_lhs() != p2.conclusion())
        return fail(path, CheckCode::RuleMismatch,
                    "mp second premise does not match the antecedent");
      if (p1.conclusion().imp_rhs() != c.conclusion())
        return fail(path, CheckCode::RuleMismatch,
                    "mp conclusion does not match the consequent");
      if (!p1.same_assumptions(p2) || !p1.same_assumptions(c))
        return fail(path, CheckCode::RuleMismatch,
                    "mp sequents differ in assumptions");
      return std::nullopt;
    }
    case Rule::DN: {
      if (auto e = arity(1)) return e;
      const Sequent& p = ps[0]->conclusion();
      if (!p.same_assumptions(c))
        return fail(path, CheckCode::RuleMismatch,
                    "dn changes the assumptions");
      if (p.conclusion() != neg(neg(c.conclusion())))
        return fail(path, CheckCode::RuleMismatch,
                    "dn premise is not the double negation of the conclusion");
      return std::nullopt;
    }
    case Rule::Lam: {
      if (auto e = arity(1)) return e;
      const Sequent& p = ps[0]->conclusion();
      if (!p.same_assumptions(c))
        return fail(path, CheckCode::RuleMismatch,
                    "lam changes the assumptions");
      if (p.conclusion().type() != c.conclusion().type())
        return fail(path, CheckCode::IllTyped, "lam changes the type");
      if (!lambda_equiv(p.conclusion(), c.conclusion()))
        return fail(path, CheckCode::NotLambdaEquivalent,
                    "lam premise and conclusion are not lambda-equivalent");
      return std::nullopt;
    }
    case Rule::BR: {
      if (auto e = arity(2)) return e;
      if (!d.br_payload())
        return fail(path, CheckCode::RuleMismatch, "br without payload");
      const auto& br = *d.br_payload();
      const Sequent& p_eq = ps[0]->conclusion();
      const Sequent& p_body = ps[1]->conclusion();
      if (br.lhs.type() != br.rhs.type())
        return fail(path, CheckCode::IllTyped,
                    "br equation sides differ in type");
      if (!br.lhs.type().is_base())
        return fail(path, CheckCode::IllTyped,
                    "br replaces at a non-Boolean type");
      if (p_eq.conclusion() != equiv(br.lhs, br.rhs))
        return fail(path, CheckCode::RuleMismatch,
                    "br first premise is not the literal equation expansion");
      if (!p_eq.same_assumptions(c) || !p_body.same_assumptions(c))
        return fail(path, CheckCode::RuleMismatch,
                    "br sequents differ in assumptions");
      Term cs = Term::bot(), ct = Term::bot();
      try {
        cs = plug(br.context, br.lhs);
        ct = plug(br.context, br.rhs);
      } catch (const TypeError& e) {
        return fail(path, CheckCode::IllTyped,
                    std::string("br context does not accept the equation "
                                "sides: ") +
                        e.what());
      }
      if (p_body.conclusion() != cs)
        return fail(path, CheckCode::RuleMismatch,
                    "br second premise is not C[s]");
      if (c.conclusion() != ct)
        return fail(path, CheckCode::RuleMismatch,
                    "br conclusion is not C[t]");
      if (!admissible(br.context, c.assumptions()))
        return fail(path, CheckCode::AdmissibilityViolation,
                    "br context captures a variable free in the assumptions");
      return std::nullopt;
    }
  }
  return fail(path, CheckCode::RuleMismatch, "unknown rule");
}

// Node validity depends only on the node itself and its children's
// conclusions, so a subtree shared by several parents need only be
// visited once.
std::optional<CheckError> check_rec(
    const Derivation& d, std::vector<int>& path,
    std::unordered_set<const Derivation*>& done) {
  if (done.count(&d)) return std::nullopt;
  if (auto e = check_node(d, path)) return e;
  for (size_t i = 0; i < d.premises().size(); ++i) {
    path.push_back(static_cast<int>(i));
    if (auto e = check_rec(*d.premises()[i], path, done)) return e;
    path.pop_back();
  }
  done.insert(&d);
  return std::nullopt;
}

}  // namespace

std::optional<CheckError> check(const Derivation& d) {
  std::vector<int> path;
  std::unordered_set<const Derivation*> done;
  return check_rec(d, path, done);
}

bool checks(const Derivation& d) { return !check(d).has_value(); }

}  // namespace ptt
