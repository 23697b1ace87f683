// Boolean formulae over system atoms: construction, parsing, evaluation,
// and canonical printing.
//
// Concrete syntax (whitespace outside braces is insignificant):
//
//   expr    := or
//   or      := and { "|" and }            left-associative
//   and     := unary { "&" unary }        left-associative
//   unary   := ("!" | "¬") unary | primary
//   primary := "true" | "false" | atom | "(" expr ")"
//   atom    := "{" name "." name "}"
//
// The last "." inside the braces separates the concept name from the state
// name; names may contain anything except ".", "{", "}" and are trimmed of
// surrounding whitespace. "¬" is accepted on input only, never printed.

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "reqtest/errors.hpp"

namespace reqtest {

// One proposition "concept is in state", e.g. {Feedwater Tank.underflows}.
struct Atom {
  std::string concept_name;
  std::string state_name;
  auto operator<=>(const Atom&) const = default;
};

// Renders as "{concept.state}".
std::string to_string(const Atom& atom);

// Thrown by evaluate() when a formula references an atom the valuation
// does not cover; names the first such atom in evaluation order.
struct MissingAtomError : Error {
  Atom atom;
  explicit MissingAtomError(Atom a)
      : Error("no value for atom " + to_string(a)), atom(std::move(a)) {}
};

// Immutable formula tree. Copies share structure and are cheap; all
// observers are const, so values can be shared across threads freely.
class BoolExpr {
 public:
  enum class Kind { True, False, Atom, Not, And, Or };

  static BoolExpr constant(bool value);
  static BoolExpr atom(Atom a);
  static BoolExpr negation(BoolExpr e);
  static BoolExpr conjunction(BoolExpr lhs, BoolExpr rhs);
  static BoolExpr disjunction(BoolExpr lhs, BoolExpr rhs);

  Kind kind() const;
  const Atom& atom_value() const;  // Kind::Atom only
  const BoolExpr& child() const;   // Kind::Not only
  const BoolExpr& lhs() const;     // Kind::And / Kind::Or
  const BoolExpr& rhs() const;     // Kind::And / Kind::Or

  // Structural equality.
  bool operator==(const BoolExpr& other) const;

 private:
  struct Node;
  explicit BoolExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Parses one complete expression; trailing input is an error.
BoolExpr parse_expr(std::string_view text);

// Fully parenthesized rendering; parse_expr(canonical(e)) == e.
std::string canonical(const BoolExpr& e);

// Exactly the atoms appearing in e; constants yield the empty set.
std::set<Atom> atoms_of(const BoolExpr& e);

// Standard Boolean semantics. Both subtrees of a connective are evaluated,
// so a missing atom is reported regardless of short-circuit value.
bool evaluate(const BoolExpr& e, const std::map<Atom, bool>& valuation);
bool evaluate(const BoolExpr& e,
              const std::function<std::optional<bool>(const Atom&)>& lookup);

// Left-associated conjunction in list order; empty yields TRUE, a
// singleton the formula itself.
BoolExpr conjoin(const std::vector<BoolExpr>& formulas);

// Empty when the names satisfy the atom character rules, else a message.
std::optional<std::string> atom_name_error(const Atom& atom);

}  // namespace reqtest
