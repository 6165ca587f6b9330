#include "ptt/semantics.hpp"

#include <atomic>
#include <algorithm>

namespace ptt {

struct Value::Node {
  TypeExpr type = TypeExpr::base();
  int bit = -1;  // >= 0 for bits, -1 for tables
  std::vector<Value> entries;
  std::uint64_t hash = 0;
};

namespace {

std::uint64_t fnv(std::uint64_t h, std::uint64_t v) {
  h ^= v;
  h *= 1099511628211ull;
  return h;
}

}  // namespace

Value Value::bit(int b) {
  static const auto zero = [] {
    auto n = std::make_shared<Node>();
    n->bit = 0;
    n->hash = 0xb0;
    return n;
  }();
  static const auto one = [] {
    auto n = std::make_shared<Node>();
    n->bit = 1;
    n->hash = 0xb1;
    return n;
  }();
  if (b != 0 && b != 1) throw TypeError("bit value must be 0 or 1");
  return Value(b ? one : zero);
}

Value Value::table(const TypeExpr& domain_type, std::vector<Value> entries) {
  if (entries.empty()) throw TypeError("a value table cannot be empty");
  const TypeExpr cod = entries.front().type();
  std::uint64_t h = fnv(0x7ab1e, domain_type.hash());
  for (const auto& e : entries) {
    if (e.type() != cod)
      throw TypeError("value table entries must share one type");
    h = fnv(h, e.node_->hash);
  }
  auto n = std::make_shared<Node>();
  n->type = TypeExpr::arrow(domain_type, cod);
  n->entries = std::move(entries);
  n->hash = h;
  return Value(std::move(n));
}

bool Value::is_bit() const { return node_->bit >= 0; }

int Value::bit_value() const {
  if (!is_bit()) throw TypeError("not a base-type value");
  return node_->bit;
}

const TypeExpr& Value::type() const { return node_->type; }

const std::vector<Value>& Value::entries() const {
  if (is_bit()) throw TypeError("not a function table");
  return node_->entries;
}

TypeExpr Value::domain_type() const {
  if (is_bit()) throw TypeError("not a function table");
  return node_->type.domain();
}

bool Value::operator==(const Value& o) const {
  if (node_ == o.node_) return true;
  if (node_->hash != o.node_->hash) return false;
  return compare(*this, o) == 0;
}

int Value::compare(const Value& a, const Value& b) {
  if (a.node_ == b.node_) return 0;
  if (a.is_bit() != b.is_bit()) return a.is_bit() ? -1 : 1;
  if (a.is_bit())
    return a.bit_value() == b.bit_value() ? 0
           : a.bit_value() < b.bit_value() ? -1
                                           : 1;
  if (int c = TypeExpr::compare(a.type(), b.type())) return c;
  // Same type implies same entry count; lexicographic on entries.
  for (size_t i = 0; i < a.entries().size(); ++i)
    if (int c = compare(a.entries()[i], b.entries()[i])) return c;
  return 0;
}

std::string Value::to_string() const {
  if (is_bit()) return bit_value() ? "1" : "0";
  std::string out = "[";
  for (size_t i = 0; i < entries().size(); ++i) {
    if (i) out += ",";
    out += entries()[i].to_string();
  }
  out += "]";
  return out;
}

std::uint64_t value_count(const TypeExpr& type, std::uint64_t guard) {
  if (guard < 2) throw TooLargeError("guard must be at least 2");
  if (type.is_base()) return 2;
  std::uint64_t d = value_count(type.domain(), guard);
  std::uint64_t c = value_count(type.codomain(), guard);
  // c^d with overflow and guard checks.
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < d; ++i) {
    if (r > guard / c)
      throw TooLargeError("value count of " + type.to_string() +
                          " exceeds the guard (" + std::to_string(guard) +
                          ")");
    r *= c;
  }
  if (r > guard)
    throw TooLargeError("value count of " + type.to_string() +
                        " exceeds the guard (" + std::to_string(guard) + ")");
  return r;
}

std::vector<Value> enum_values(const TypeExpr& type, std::uint64_t guard) {
  if (type.is_base()) return {Value::bit(0), Value::bit(1)};
  std::uint64_t total = value_count(type, guard);
  std::vector<Value> dom = enum_values(type.domain(), guard);
  std::vector<Value> cod = enum_values(type.codomain(), guard);
  std::vector<Value> out;
  out.reserve(total);
  // Odometer over entry indices, last slot fastest: lexicographic order
  // with the first entry most significant.
  std::vector<size_t> idx(dom.size(), 0);
  while (true) {
    std::vector<Value> entries;
    entries.reserve(dom.size());
    for (size_t i = 0; i < dom.size(); ++i) entries.push_back(cod[idx[i]]);
    out.push_back(Value::table(type.domain(), std::move(entries)));
    size_t i = dom.size();
    while (i > 0) {
      --i;
      if (++idx[i] < cod.size()) break;
      idx[i] = 0;
      if (i == 0) return out;
    }
  }
}

std::uint64_t value_index(const Value& v, std::uint64_t guard) {
  if (v.is_bit()) return static_cast<std::uint64_t>(v.bit_value());
  std::uint64_t cod_count = value_count(v.type().codomain(), guard);
  std::uint64_t idx = 0;
  for (const auto& e : v.entries()) idx = idx * cod_count + value_index(e, guard);
  return idx;
}

Value apply_value(const Value& f, const Value& a) {
  if (f.is_bit()) throw TypeError("apply_value: not a function table");
  if (f.domain_type() != a.type())
    throw TypeError("apply_value: domain mismatch (" +
                    f.domain_type().to_string() + " vs " +
                    a.type().to_string() + ")");
  return f.entries()[value_index(a)];
}

namespace {

const Value& imp_table() {
  // imp a b = 1 if a = 0 else b, as a table over B with table entries.
  static const Value t = [] {
    Value const1 = Value::table(TypeExpr::base(), {Value::bit(1), Value::bit(1)});
    Value ident = Value::table(TypeExpr::base(), {Value::bit(0), Value::bit(1)});
    return Value::table(TypeExpr::base(), {const1, ident});
  }();
  return t;
}

Value eval_rec(const Term& s, const Assignment& assignment,
               std::vector<Value>& bound, std::uint64_t guard) {
  switch (s.kind()) {
    case TermKind::Bot:
      return Value::bit(0);
    case TermKind::Imp:
      return imp_table();
    case TermKind::FreeVar: {
      auto it = assignment.find(s.var_name());
      if (it == assignment.end())
        throw UnboundVariableError("unbound variable " + s.var_name().id +
                                   " : " + s.var_name().type.to_string());
      if (it->second.type() != s.var_name().type)
        throw TypeError("assignment for " + s.var_name().id +
                        " has the wrong type");
      return it->second;
    }
    case TermKind::BoundVar:
      return bound[bound.size() - 1 - static_cast<size_t>(s.bound_index())];
    case TermKind::App: {
      Value f = eval_rec(s.fun(), assignment, bound, guard);
      Value a = eval_rec(s.arg(), assignment, bound, guard);
      return apply_value(f, a);
    }
    case TermKind::Lam: {
      std::vector<Value> entries;
      std::vector<Value> dom = enum_values(s.binder_type(), guard);
      entries.reserve(dom.size());
      Term body = s.body();
      for (const auto& a : dom) {
        bound.push_back(a);
        entries.push_back(eval_rec(body, assignment, bound, guard));
        bound.pop_back();
      }
      return Value::table(s.binder_type(), std::move(entries));
    }
  }
  throw TypeError("eval: unreachable term kind");
}

}  // namespace

Value eval(const Term& s, const Assignment& assignment, std::uint64_t guard) {
  std::vector<Value> bound;
  return eval_rec(s, assignment, bound, guard);
}

AssignmentSpace AssignmentSpace::over(const std::vector<VarName>& vars,
                                      std::uint64_t guard) {
  AssignmentSpace space;
  space.vars = vars;
  space.total = 1;
  for (const auto& v : vars) {
    space.domains.push_back(enum_values(v.type, guard));
    std::uint64_t n = space.domains.back().size();
    if (space.total > guard / n)
      throw TooLargeError("assignment space exceeds the guard (" +
                          std::to_string(guard) + ")");
    space.total *= n;
  }
  return space;
}

Assignment AssignmentSpace::decode(std::uint64_t index) const {
  Assignment a;
  for (size_t i = vars.size(); i-- > 0;) {
    std::uint64_t n = domains[i].size();
    a.emplace(vars[i], domains[i][index % n]);
    index /= n;
  }
  return a;
}

namespace {

bool sequent_holds_at(const AssignmentSpace& space,
                      const std::vector<Term>& assumptions,
                      const Term& conclusion, std::uint64_t index,
                      std::uint64_t guard) {
  Assignment a = space.decode(index);
  for (const auto& h : assumptions)
    if (eval(h, a, guard).bit_value() != 1) return true;  // vacuous
  return eval(conclusion, a, guard).bit_value() == 1;
}

std::optional<std::uint64_t> scan_serial(const AssignmentSpace& space,
                                         const std::vector<Term>& assumptions,
                                         const Term& conclusion,
                                         std::uint64_t guard) {
  for (std::uint64_t i = 0; i < space.total; ++i)
    if (!sequent_holds_at(space, assumptions, conclusion, i, guard)) return i;
  return std::nullopt;
}

std::optional<std::uint64_t> scan_parallel(const AssignmentSpace& space,
                                           const std::vector<Term>& assumptions,
                                           const Term& conclusion,
                                           std::uint64_t guard) {
  const std::uint64_t total = space.total;
  std::atomic<std::uint64_t> best{UINT64_MAX};
  const std::int64_t n = static_cast<std::int64_t>(total);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) {
    std::uint64_t u = static_cast<std::uint64_t>(i);
    if (u >= best.load(std::memory_order_relaxed)) continue;
    if (!sequent_holds_at(space, assumptions, conclusion, u, guard)) {
      std::uint64_t prev = best.load(std::memory_order_relaxed);
      while (u < prev &&
             !best.compare_exchange_weak(prev, u, std::memory_order_relaxed)) {
      }
    }
  }
  std::uint64_t found = best.load();
  if (found == UINT64_MAX) return std::nullopt;
  return found;
}

Term require_formula(const Term& s) {
  if (!s.type().is_base())
    throw TypeError("expected a formula (type B), got " +
                    s.type().to_string());
  return s;
}

std::vector<VarName> sequent_vars(const std::vector<Term>& assumptions,
                                  const Term& conclusion) {
  std::set<VarName> vars = free_vars(conclusion);
  for (const auto& h : assumptions)
    for (const auto& v : free_vars(h)) vars.insert(v);
  return {vars.begin(), vars.end()};
}

}  // namespace

std::optional<std::uint64_t> first_failing_index(
    const AssignmentSpace& space, const std::vector<Term>& assumptions,
    const Term& conclusion, ScanMode mode, std::uint64_t guard) {
  if (mode == ScanMode::Serial)
    return scan_serial(space, assumptions, conclusion, guard);
  return scan_parallel(space, assumptions, conclusion, guard);
}

bool is_valid(const Term& s, std::uint64_t guard, ScanMode mode) {
  require_formula(s);
  auto space = AssignmentSpace::over(sequent_vars({}, s), guard);
  return !first_failing_index(space, {}, s, mode, guard).has_value();
}

bool is_valid_sequent(const std::vector<Term>& assumptions,
                      const Term& conclusion, std::uint64_t guard,
                      ScanMode mode) {
  require_formula(conclusion);
  for (const auto& h : assumptions) require_formula(h);
  auto space = AssignmentSpace::over(sequent_vars(assumptions, conclusion), guard);
  return !first_failing_index(space, assumptions, conclusion, mode, guard)
              .has_value();
}

std::optional<Assignment> countermodel(const Term& s, std::uint64_t guard,
                                       ScanMode mode) {
  return countermodel_sequent({}, s, guard, mode);
}

std::optional<Assignment> countermodel_sequent(
    const std::vector<Term>& assumptions, const Term& conclusion,
    std::uint64_t guard, ScanMode mode) {
  require_formula(conclusion);
  for (const auto& h : assumptions) require_formula(h);
  auto space = AssignmentSpace::over(sequent_vars(assumptions, conclusion), guard);
  auto idx = first_failing_index(space, assumptions, conclusion, mode, guard);
  if (!idx) return std::nullopt;
  return space.decode(*idx);
}

}  // namespace ptt
