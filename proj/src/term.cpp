#include "ptt/term.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

namespace ptt {

namespace {

std::uint64_t fnv(std::uint64_t h, std::uint64_t v) {
  h ^= v;
  h *= 1099511628211ull;
  return h;
}

std::uint64_t hash_string(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) h = fnv(h, c);
  return h;
}

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words = {
      "bot",     "imp", "top", "forall", "var", "B",  "triv",    "weak",
      "ded",     "mp",  "dn",  "lam",    "br",  "underlam", "intofun",
      "intoarg"};
  return words;
}

bool valid_ident(const std::string& id) {
  if (id.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(id[0])) && id[0] != '_')
    return false;
  for (char c : id)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'')
      return false;
  return true;
}

}  // namespace

bool is_reserved_word(const std::string& id) {
  return reserved_words().count(id) > 0;
}

VarName::VarName(std::string id_, TypeExpr type_)
    : id(std::move(id_)), type(std::move(type_)) {
  if (!valid_ident(id))
    throw TypeError("invalid variable identifier '" + id + "'");
  if (is_reserved_word(id))
    throw TypeError("'" + id + "' is reserved and cannot be a variable");
}

struct Term::Node {
  TermKind kind;
  TypeExpr type = TypeExpr::base();
  std::uint64_t hash = 0;
  std::uint32_t size = 1;
  std::uint32_t loose = 0;  // 0 iff locally closed
  std::optional<VarName> name;       // FreeVar
  int index = 0;                     // BoundVar
  std::shared_ptr<const Node> a, b;  // Lam: a = body; App: a, b
};

namespace {

using NodePtr = std::shared_ptr<const Term::Node>;

Term wrap(NodePtr n) { return Term(std::move(n)); }

NodePtr mk_free(const VarName& v) {
  auto n = std::make_shared<Term::Node>();
  n->kind = TermKind::FreeVar;
  n->type = v.type;
  n->hash = fnv(fnv(hash_string(v.id), v.type.hash()), 0x11);
  n->name = v;
  return n;
}

NodePtr mk_bound(int index, const TypeExpr& type) {
  auto n = std::make_shared<Term::Node>();
  n->kind = TermKind::BoundVar;
  n->type = type;
  n->hash = fnv(fnv(0x22, static_cast<std::uint64_t>(index)), type.hash());
  n->loose = static_cast<std::uint32_t>(index) + 1;
  n->index = index;
  return n;
}

NodePtr mk_lam(const TypeExpr& binder, const NodePtr& body) {
  auto n = std::make_shared<Term::Node>();
  n->kind = TermKind::Lam;
  n->type = TypeExpr::arrow(binder, body->type);
  n->hash = fnv(fnv(0x33, binder.hash()), body->hash);
  n->size = body->size + 1;
  n->loose = body->loose > 0 ? body->loose - 1 : 0;
  n->a = body;
  return n;
}

NodePtr mk_app_unchecked(const NodePtr& fun, const NodePtr& arg) {
  auto n = std::make_shared<Term::Node>();
  n->kind = TermKind::App;
  n->type = fun->type.codomain();
  n->hash = fnv(fnv(0x44, fun->hash), arg->hash);
  n->size = fun->size + arg->size + 1;
  n->loose = std::max(fun->loose, arg->loose);
  n->a = fun;
  n->b = arg;
  return n;
}

// Adds d to every loose index >= cutoff. d may be negative; the caller
// guarantees no index underflows.
NodePtr shift(const NodePtr& t, int d, int cutoff) {
  if (t->loose <= static_cast<std::uint32_t>(cutoff) || d == 0) return t;
  switch (t->kind) {
    case TermKind::BoundVar:
      if (t->index >= cutoff) return mk_bound(t->index + d, t->type);
      return t;
    case TermKind::Lam:
      return mk_lam(t->type.domain(), shift(t->a, d, cutoff + 1));
    case TermKind::App:
      return mk_app_unchecked(shift(t->a, d, cutoff), shift(t->b, d, cutoff));
    default:
      return t;
  }
}

// Replaces index `depth` by s (lifted as needed) and decrements the loose
// indices above it: the body-opening step of a beta contraction.
NodePtr open_with(const NodePtr& body, const NodePtr& s, int depth) {
  if (body->loose <= static_cast<std::uint32_t>(depth)) return body;
  switch (body->kind) {
    case TermKind::BoundVar:
      if (body->index == depth) return shift(s, depth, 0);
      if (body->index > depth) return mk_bound(body->index - 1, body->type);
      return body;
    case TermKind::Lam:
      return mk_lam(body->type.domain(), open_with(body->a, s, depth + 1));
    case TermKind::App:
      return mk_app_unchecked(open_with(body->a, s, depth),
                              open_with(body->b, s, depth));
    default:
      return body;
  }
}

NodePtr close_rec(const NodePtr& t, const std::vector<VarName>& names,
                  int depth) {
  switch (t->kind) {
    case TermKind::FreeVar: {
      // Innermost matching binder wins.
      for (int j = static_cast<int>(names.size()) - 1; j >= 0; --j) {
        if (names[static_cast<size_t>(j)] == *t->name) {
          int idx = depth + (static_cast<int>(names.size()) - 1 - j);
          return mk_bound(idx, t->type);
        }
      }
      return t;
    }
    case TermKind::Lam:
      return mk_lam(t->type.domain(), close_rec(t->a, names, depth + 1));
    case TermKind::App:
      return mk_app_unchecked(close_rec(t->a, names, depth),
                              close_rec(t->b, names, depth));
    default:
      return t;
  }
}

NodePtr open_rec(const NodePtr& t, const std::vector<VarName>& names,
                 int depth) {
  if (t->loose <= static_cast<std::uint32_t>(depth)) return t;
  switch (t->kind) {
    case TermKind::BoundVar: {
      int j = static_cast<int>(names.size()) - 1 - (t->index - depth);
      if (t->index >= depth && j >= 0 && j < static_cast<int>(names.size()))
        return mk_free(names[static_cast<size_t>(j)]);
      return t;
    }
    case TermKind::Lam:
      return mk_lam(t->type.domain(), open_rec(t->a, names, depth + 1));
    case TermKind::App:
      return mk_app_unchecked(open_rec(t->a, names, depth),
                              open_rec(t->b, names, depth));
    default:
      return t;
  }
}

bool node_equal(const Term::Node* a, const Term::Node* b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->hash != b->hash || a->size != b->size ||
      a->loose != b->loose)
    return false;
  switch (a->kind) {
    case TermKind::FreeVar:
      return *a->name == *b->name;
    case TermKind::BoundVar:
      return a->index == b->index && a->type == b->type;
    case TermKind::Bot:
    case TermKind::Imp:
      return true;
    case TermKind::Lam:
      return a->type == b->type && node_equal(a->a.get(), b->a.get());
    case TermKind::App:
      return node_equal(a->a.get(), b->a.get()) &&
             node_equal(a->b.get(), b->b.get());
  }
  return false;
}

int kind_rank(TermKind k) {
  switch (k) {
    case TermKind::Bot: return 0;
    case TermKind::Imp: return 1;
    case TermKind::BoundVar: return 2;
    case TermKind::FreeVar: return 3;
    case TermKind::Lam: return 4;
    case TermKind::App: return 5;
  }
  return 6;
}

int node_compare(const Term::Node* a, const Term::Node* b) {
  if (a == b) return 0;
  if (a->kind != b->kind)
    return kind_rank(a->kind) < kind_rank(b->kind) ? -1 : 1;
  switch (a->kind) {
    case TermKind::Bot:
    case TermKind::Imp:
      return 0;
    case TermKind::BoundVar:
      if (a->index != b->index) return a->index < b->index ? -1 : 1;
      return TypeExpr::compare(a->type, b->type);
    case TermKind::FreeVar:
      if (a->name->id != b->name->id)
        return a->name->id < b->name->id ? -1 : 1;
      return TypeExpr::compare(a->name->type, b->name->type);
    case TermKind::Lam:
      if (int c = TypeExpr::compare(a->type.domain(), b->type.domain()))
        return c;
      return node_compare(a->a.get(), b->a.get());
    case TermKind::App:
      if (int c = node_compare(a->a.get(), b->a.get())) return c;
      return node_compare(a->b.get(), b->b.get());
  }
  return 0;
}

}  // namespace

// -- factories ----------------------------------------------------------

Term Term::var(const VarName& name) { return wrap(mk_free(name)); }

Term Term::bot() {
  static const NodePtr node = [] {
    auto n = std::make_shared<Term::Node>();
    n->kind = TermKind::Bot;
    n->type = TypeExpr::base();
    n->hash = 0xb07b07b07b07b07bull;
    return n;
  }();
  return wrap(node);
}

Term Term::imp_const() {
  static const NodePtr node = [] {
    auto n = std::make_shared<Term::Node>();
    n->kind = TermKind::Imp;
    TypeExpr b = TypeExpr::base();
    n->type = TypeExpr::arrow(b, TypeExpr::arrow(b, b));
    n->hash = 0x1347bca1347bca13ull;
    return n;
  }();
  return wrap(node);
}

Term Term::lam(const VarName& binder, const Term& body) {
  return wrap(mk_lam(binder.type, close_rec(body.ptr(), {binder}, 0)));
}

Term Term::app(const Term& fun, const Term& arg) {
  if (!fun.type().is_arrow())
    throw TypeError("application of a non-function (type " +
                    fun.type().to_string() + ")");
  if (fun.type().domain() != arg.type())
    throw TypeError("application domain mismatch: expected " +
                    fun.type().domain().to_string() + ", got " +
                    arg.type().to_string());
  return wrap(mk_app_unchecked(fun.ptr(), arg.ptr()));
}

Term Term::imp(const Term& a, const Term& b) {
  return app(app(imp_const(), a), b);
}

// -- observers ------------------------------------------------------------

TermKind Term::kind() const { return node_->kind; }

const TypeExpr& Term::type() const { return node_->type; }

std::uint32_t Term::node_count() const { return node_->size; }

std::uint64_t Term::hash() const { return node_->hash; }

const VarName& Term::var_name() const {
  if (kind() != TermKind::FreeVar) throw TypeError("not a free variable");
  return *node_->name;
}

int Term::bound_index() const {
  if (kind() != TermKind::BoundVar) throw TypeError("not a bound variable");
  return node_->index;
}

TypeExpr Term::binder_type() const {
  if (kind() != TermKind::Lam) throw TypeError("not an abstraction");
  return type().domain();
}

Term Term::body() const {
  if (kind() != TermKind::Lam) throw TypeError("not an abstraction");
  return wrap(node_->a);
}

Term Term::open_body(const VarName& x) const {
  if (kind() != TermKind::Lam) throw TypeError("not an abstraction");
  if (x.type != binder_type())
    throw TypeError("open_body: name type does not match binder type");
  return wrap(open_rec(node_->a, {x}, 0));
}

Term Term::fun() const {
  if (kind() != TermKind::App) throw TypeError("not an application");
  return wrap(node_->a);
}

Term Term::arg() const {
  if (kind() != TermKind::App) throw TypeError("not an application");
  return wrap(node_->b);
}

bool Term::operator==(const Term& o) const {
  return node_equal(node_.get(), o.node_.get());
}

int Term::compare(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return 0;
  // The stable structural hash gives a deterministic total order with a
  // constant-time common case; ties fall back to structural comparison.
  if (a.node_->hash != b.node_->hash)
    return a.node_->hash < b.node_->hash ? -1 : 1;
  return node_compare(a.node_.get(), b.node_.get());
}

bool Term::is_imp_app() const {
  return kind() == TermKind::App && node_->a->kind == TermKind::App &&
         node_->a->a->kind == TermKind::Imp;
}

Term Term::imp_lhs() const {
  if (!is_imp_app()) throw TypeError("not an implication");
  return wrap(node_->a->b);
}

Term Term::imp_rhs() const {
  if (!is_imp_app()) throw TypeError("not an implication");
  return wrap(node_->b);
}

// -- free variables -------------------------------------------------------

namespace {
void free_vars_rec(const Term::Node* t,
                   std::unordered_set<const Term::Node*>& seen,
                   std::set<VarName>& out) {
  if (!seen.insert(t).second) return;
  switch (t->kind) {
    case TermKind::FreeVar:
      out.insert(*t->name);
      break;
    case TermKind::Lam:
      free_vars_rec(t->a.get(), seen, out);
      break;
    case TermKind::App:
      free_vars_rec(t->a.get(), seen, out);
      free_vars_rec(t->b.get(), seen, out);
      break;
    default:
      break;
  }
}
}  // namespace

std::set<VarName> free_vars(const Term& s) {
  std::set<VarName> out;
  std::unordered_set<const Term::Node*> seen;
  free_vars_rec(s.raw(), seen, out);
  return out;
}

bool is_closed(const Term& s) { return free_vars(s).empty(); }

void collect_idents(const Term& s, std::set<std::string>& out) {
  for (const auto& v : free_vars(s)) out.insert(v.id);
}

// -- substitution ---------------------------------------------------------

namespace {
NodePtr subst_rec(const NodePtr& t, const VarName& x, const NodePtr& repl) {
  switch (t->kind) {
    case TermKind::FreeVar:
      if (*t->name == x) return repl;
      return t;
    case TermKind::Lam:
      // The replacement's loose indices (if any) must clear the binder it
      // moves under.
      return mk_lam(t->type.domain(),
                    subst_rec(t->a, x, shift(repl, 1, 0)));
    case TermKind::App:
      return mk_app_unchecked(subst_rec(t->a, x, repl),
                              subst_rec(t->b, x, repl));
    default:
      return t;
  }
}
}  // namespace

Term substitute(const Term& s, const VarName& x, const Term& t) {
  if (t.type() != x.type)
    throw TypeError("substitute: term of type " + t.type().to_string() +
                    " for variable " + x.id + " : " + x.type.to_string());
  return wrap(subst_rec(s.ptr(), x, t.ptr()));
}

Term substitute_many(const Term& s,
                     const std::vector<std::pair<VarName, Term>>& subs) {
  Term cur = s;
  for (const auto& [x, t] : subs) cur = substitute(cur, x, t);
  return cur;
}

// -- normalization ----------------------------------------------------------

namespace {

// Keyed by shared_ptr so memoized intermediate nodes stay alive; a freed
// node's address could otherwise be reused and produce stale hits.
using Memo = std::unordered_map<NodePtr, NodePtr>;

NodePtr nf_rec(const NodePtr& t, Memo& memo) {
  auto it = memo.find(t);
  if (it != memo.end()) return it->second;
  NodePtr result;
  switch (t->kind) {
    case TermKind::Lam:
      result = mk_lam(t->type.domain(), nf_rec(t->a, memo));
      break;
    case TermKind::App: {
      NodePtr f = nf_rec(t->a, memo);
      if (f->kind == TermKind::Lam)
        result = nf_rec(open_with(f->a, t->b, 0), memo);
      else
        result = mk_app_unchecked(f, nf_rec(t->b, memo));
      break;
    }
    default:
      result = t;
      break;
  }
  memo.emplace(t, result);
  return result;
}

bool contains_index(const Term::Node* t, int idx) {
  if (t->loose <= static_cast<std::uint32_t>(idx)) return false;
  switch (t->kind) {
    case TermKind::BoundVar:
      return t->index == idx;
    case TermKind::Lam:
      return contains_index(t->a.get(), idx + 1);
    case TermKind::App:
      return contains_index(t->a.get(), idx) ||
             contains_index(t->b.get(), idx);
    default:
      return false;
  }
}

// One bottom-up pass of eta contraction; on a beta-normal input this
// reaches the beta-eta-normal form.
NodePtr eta_rec(const NodePtr& t, Memo& memo) {
  auto it = memo.find(t);
  if (it != memo.end()) return it->second;
  NodePtr result;
  switch (t->kind) {
    case TermKind::Lam: {
      NodePtr body = eta_rec(t->a, memo);
      if (body->kind == TermKind::App &&
          body->b->kind == TermKind::BoundVar && body->b->index == 0 &&
          !contains_index(body->a.get(), 0)) {
        result = shift(body->a, -1, 1);
      } else {
        result = mk_lam(t->type.domain(), body);
      }
      break;
    }
    case TermKind::App:
      result = mk_app_unchecked(eta_rec(t->a, memo), eta_rec(t->b, memo));
      break;
    default:
      result = t;
      break;
  }
  memo.emplace(t, result);
  return result;
}

bool beta_normal_rec(const Term::Node* t,
                     std::unordered_set<const Term::Node*>& seen) {
  if (!seen.insert(t).second) return true;
  switch (t->kind) {
    case TermKind::Lam:
      return beta_normal_rec(t->a.get(), seen);
    case TermKind::App:
      if (t->a->kind == TermKind::Lam) return false;
      return beta_normal_rec(t->a.get(), seen) &&
             beta_normal_rec(t->b.get(), seen);
    default:
      return true;
  }
}

}  // namespace

Term beta_normalize(const Term& s) {
  Memo memo;
  return wrap(nf_rec(s.ptr(), memo));
}

bool is_beta_normal(const Term& s) {
  std::unordered_set<const Term::Node*> seen;
  return beta_normal_rec(s.raw(), seen);
}

Term canonical_form(const Term& s) {
  Memo beta_memo;
  NodePtr b = nf_rec(s.ptr(), beta_memo);
  Memo eta_memo;
  return wrap(eta_rec(b, eta_memo));
}

bool lambda_equiv(const Term& s, const Term& t) {
  if (s.type() != t.type())
    throw TypeError("lambda_equiv: type mismatch (" + s.type().to_string() +
                    " vs " + t.type().to_string() + ")");
  return canonical_form(s) == canonical_form(t);
}

VarName fresh_var(const std::string& stem, const TypeExpr& type,
                  const std::set<std::string>& avoid) {
  if (!avoid.count(stem) && !is_reserved_word(stem)) return VarName(stem, type);
  long long max_suffix = 0;  // the bare stem counts as suffix 0
  for (const auto& id : avoid) {
    if (id.size() <= stem.size() || id.compare(0, stem.size(), stem) != 0)
      continue;
    std::string rest = id.substr(stem.size());
    if (!std::all_of(rest.begin(), rest.end(), [](unsigned char c) {
          return std::isdigit(c);
        }))
      continue;
    max_suffix = std::max(max_suffix, std::stoll(rest));
  }
  return VarName(stem + std::to_string(max_suffix + 1), type);
}

// -- contexts ---------------------------------------------------------------

ContextStep ContextStep::under_lam(const VarName& b) {
  ContextStep s;
  s.kind = Kind::UnderLam;
  s.binder = b;
  return s;
}

ContextStep ContextStep::into_fun(const Term& sibling_arg) {
  ContextStep s;
  s.kind = Kind::IntoFun;
  s.sibling = sibling_arg;
  return s;
}

ContextStep ContextStep::into_arg(const Term& sibling_fun) {
  ContextStep s;
  s.kind = Kind::IntoArg;
  s.sibling = sibling_fun;
  return s;
}

bool ContextStep::operator==(const ContextStep& o) const {
  if (kind != o.kind) return false;
  if (binder.has_value() != o.binder.has_value()) return false;
  if (binder && *binder != *o.binder) return false;
  if (sibling.has_value() != o.sibling.has_value()) return false;
  if (sibling && *sibling != *o.sibling) return false;
  return true;
}

Term plug(const ContextPath& path, const Term& s) {
  Term cur = s;
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    switch (it->kind) {
      case ContextStep::Kind::UnderLam:
        cur = Term::lam(*it->binder, cur);
        break;
      case ContextStep::Kind::IntoFun:
        cur = Term::app(cur, *it->sibling);
        break;
      case ContextStep::Kind::IntoArg:
        cur = Term::app(*it->sibling, cur);
        break;
    }
  }
  return cur;
}

std::set<VarName> binders_on_path(const ContextPath& path) {
  std::set<VarName> out;
  for (const auto& step : path)
    if (step.kind == ContextStep::Kind::UnderLam) out.insert(*step.binder);
  return out;
}

bool admissible(const ContextPath& path, const std::vector<Term>& formulas) {
  std::set<VarName> binders = binders_on_path(path);
  if (binders.empty()) return true;
  for (const auto& f : formulas)
    for (const auto& v : free_vars(f))
      if (binders.count(v)) return false;
  return true;
}

namespace detail {

Term open_multi(const Term& t, const std::vector<VarName>& names) {
  return wrap(open_rec(t.ptr(), names, 0));
}

Term close_multi(const Term& t, const std::vector<VarName>& names) {
  return wrap(close_rec(t.ptr(), names, 0));
}

}  // namespace detail

}  // namespace ptt
