#include "ptt/type.hpp"

namespace ptt {
namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  // 64-bit FNV-style mix; must be stable across runs and platforms.
  std::uint64_t h = 1469598103934665603ull ^ a;
  h *= 1099511628211ull;
  h ^= b;
  h *= 1099511628211ull;
  return h;
}

}  // namespace

TypeExpr TypeExpr::base() {
  static const auto node = std::make_shared<const Node>(
      Node{nullptr, nullptr, 0x9e3779b97f4a7c15ull});
  return TypeExpr(node);
}

TypeExpr TypeExpr::arrow(const TypeExpr& domain, const TypeExpr& codomain) {
  auto node = std::make_shared<const Node>(
      Node{domain.node_, codomain.node_, mix(domain.hash(), codomain.hash())});
  return TypeExpr(std::move(node));
}

TypeExpr TypeExpr::arrow_n(const std::vector<TypeExpr>& domains,
                           const TypeExpr& result) {
  TypeExpr t = result;
  for (auto it = domains.rbegin(); it != domains.rend(); ++it)
    t = arrow(*it, t);
  return t;
}

TypeExpr TypeExpr::domain() const { return TypeExpr(node_->dom); }

TypeExpr TypeExpr::codomain() const { return TypeExpr(node_->cod); }

std::vector<TypeExpr> TypeExpr::uncurry() const {
  std::vector<TypeExpr> domains;
  TypeExpr t = *this;
  while (t.is_arrow()) {
    domains.push_back(t.domain());
    t = t.codomain();
  }
  return domains;
}

bool TypeExpr::operator==(const TypeExpr& other) const {
  if (node_ == other.node_) return true;
  if (node_->hash != other.node_->hash) return false;
  return compare(*this, other) == 0;
}

int TypeExpr::compare(const TypeExpr& a, const TypeExpr& b) {
  if (a.node_ == b.node_) return 0;
  if (a.is_base() != b.is_base()) return a.is_base() ? -1 : 1;
  if (a.is_base()) return 0;
  if (int c = compare(TypeExpr(a.node_->dom), TypeExpr(b.node_->dom)))
    return c;
  return compare(TypeExpr(a.node_->cod), TypeExpr(b.node_->cod));
}

std::string TypeExpr::to_string() const {
  if (is_base()) return "B";
  std::string d = domain().to_string();
  if (domain().is_arrow()) d = "(" + d + ")";
  return d + "->" + codomain().to_string();
}

}  // namespace ptt
