#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ptt/term.hpp"

namespace ptt {

/// An element of the standard denotation of a type: a bit at the base type,
/// a total function table at arrow types. Tables index their entries by the
/// canonical enumeration of the domain. Immutable, structurally comparable.
class Value {
 public:
  static Value bit(int b);
  static Value table(const TypeExpr& domain_type, std::vector<Value> entries);

  bool is_bit() const;
  int bit_value() const;
  const TypeExpr& type() const;  // B for bits, domain->codomain for tables
  const std::vector<Value>& entries() const;
  TypeExpr domain_type() const;

  bool operator==(const Value& o) const;
  bool operator!=(const Value& o) const { return !(*this == o); }
  static int compare(const Value& a, const Value& b);

  /// "0", "1", or "[e0,e1,...]" with entries in canonical domain order.
  std::string to_string() const;

  struct Node;
  explicit Value(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  const std::shared_ptr<const Node>& ptr() const { return node_; }

 private:
  std::shared_ptr<const Node> node_;
};

/// The variable part of an interpretation: a finite map from variables to
/// values of their declared types. The constants are fixed and not stored.
using Assignment = std::map<VarName, Value>;

/// |B| = 2 and |s->t| = |t| ^ |s|; throws TooLargeError when the count
/// exceeds the guard.
std::uint64_t value_count(const TypeExpr& type,
                          std::uint64_t guard = kDefaultGuard);

/// All values of the type, distinct and exhausting the denotation, in
/// canonical order: bit 0 before bit 1; tables lexicographic by entry
/// sequence (first entry most significant).
std::vector<Value> enum_values(const TypeExpr& type,
                               std::uint64_t guard = kDefaultGuard);

/// Position of v in enum_values(v.type()).
std::uint64_t value_index(const Value& v, std::uint64_t guard = kDefaultGuard);

/// Table lookup; throws TypeError unless f is a table over a's type.
Value apply_value(const Value& f, const Value& a);

/// The unique compositional extension of the interpretation: bot evaluates
/// to 0, imp to the standard implication table, abstractions to full tables
/// built by enumerating the domain. Throws UnboundVariableError if the
/// assignment misses a free variable of s, TooLargeError past the guard.
Value eval(const Term& s, const Assignment& assignment,
           std::uint64_t guard = kDefaultGuard);

// -- validity scans ----------------------------------------------------

/// The assignment space over an ordered variable list: assignments are
/// ordered lexicographically, first variable most significant, each
/// variable's values in canonical order.
struct AssignmentSpace {
  std::vector<VarName> vars;
  std::vector<std::vector<Value>> domains;
  std::uint64_t total = 1;

  static AssignmentSpace over(const std::vector<VarName>& vars,
                              std::uint64_t guard = kDefaultGuard);
  Assignment decode(std::uint64_t index) const;
};

enum class ScanMode { Serial, Parallel };

/// Index of the first assignment (in canonical order) falsifying the
/// sequent "assumptions entail conclusion", or nullopt if none. The
/// parallel kernel returns the same index as the serial reference.
std::optional<std::uint64_t> first_failing_index(
    const AssignmentSpace& space, const std::vector<Term>& assumptions,
    const Term& conclusion, ScanMode mode, std::uint64_t guard = kDefaultGuard);

/// True iff s : B evaluates to 1 under every assignment of its free
/// variables.
bool is_valid(const Term& s, std::uint64_t guard = kDefaultGuard,
              ScanMode mode = ScanMode::Parallel);

/// True iff every assignment satisfying all assumptions satisfies the
/// conclusion.
bool is_valid_sequent(const std::vector<Term>& assumptions,
                      const Term& conclusion,
                      std::uint64_t guard = kDefaultGuard,
                      ScanMode mode = ScanMode::Parallel);

/// The first falsifying assignment in canonical order, or nullopt iff the
/// formula is valid.
std::optional<Assignment> countermodel(const Term& s,
                                       std::uint64_t guard = kDefaultGuard,
                                       ScanMode mode = ScanMode::Parallel);

/// Countermodel for a sequent: satisfies the assumptions, falsifies the
/// conclusion.
std::optional<Assignment> countermodel_sequent(
    const std::vector<Term>& assumptions, const Term& conclusion,
    std::uint64_t guard = kDefaultGuard, ScanMode mode = ScanMode::Parallel);

}  // namespace ptt
