#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace ptt {

/// A simple type: the base type B or an arrow between two types.
/// Immutable; cheap to copy (shared structure).
class TypeExpr {
 public:
  static TypeExpr base();
  static TypeExpr arrow(const TypeExpr& domain, const TypeExpr& codomain);

  /// Right-nested arrow d1 -> (d2 -> ... -> result).
  static TypeExpr arrow_n(const std::vector<TypeExpr>& domains,
                          const TypeExpr& result);

  bool is_base() const { return !node_->dom; }
  bool is_arrow() const { return static_cast<bool>(node_->dom); }
  TypeExpr domain() const;
  TypeExpr codomain() const;

  /// Decomposes s1 -> ... -> sn -> B into the maximal domain list.
  std::vector<TypeExpr> uncurry() const;

  bool operator==(const TypeExpr& other) const;
  bool operator!=(const TypeExpr& other) const { return !(*this == other); }
  /// Total order (base first, then lexicographic on domain/codomain).
  static int compare(const TypeExpr& a, const TypeExpr& b);

  std::uint64_t hash() const { return node_->hash; }

  /// "B", "B->B", "(B->B)->B": arrow is right-associative.
  std::string to_string() const;

 private:
  struct Node {
    std::shared_ptr<const Node> dom;  // null for base
    std::shared_ptr<const Node> cod;
    std::uint64_t hash;
  };
  explicit TypeExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace ptt
