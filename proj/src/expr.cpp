#include "reqtest/expr.hpp"

#include <utility>

#include "expr_parser.hpp"

namespace reqtest {

std::string to_string(const Atom& atom) {
  return "{" + atom.concept_name + "." + atom.state_name + "}";
}

struct BoolExpr::Node {
  Kind kind;
  reqtest::Atom atom;           // Kind::Atom
  std::optional<BoolExpr> a;    // Not: operand; And/Or: left
  std::optional<BoolExpr> b;    // And/Or: right
};

BoolExpr BoolExpr::constant(bool value) {
  static const auto true_node =
      std::make_shared<const Node>(Node{Kind::True, {}, {}, {}});
  static const auto false_node =
      std::make_shared<const Node>(Node{Kind::False, {}, {}, {}});
  return BoolExpr(value ? true_node : false_node);
}

BoolExpr BoolExpr::atom(reqtest::Atom a) {
  return BoolExpr(
      std::make_shared<const Node>(Node{Kind::Atom, std::move(a), {}, {}}));
}

BoolExpr BoolExpr::negation(BoolExpr e) {
  return BoolExpr(
      std::make_shared<const Node>(Node{Kind::Not, {}, std::move(e), {}}));
}

BoolExpr BoolExpr::conjunction(BoolExpr lhs, BoolExpr rhs) {
  return BoolExpr(std::make_shared<const Node>(
      Node{Kind::And, {}, std::move(lhs), std::move(rhs)}));
}

BoolExpr BoolExpr::disjunction(BoolExpr lhs, BoolExpr rhs) {
  return BoolExpr(std::make_shared<const Node>(
      Node{Kind::Or, {}, std::move(lhs), std::move(rhs)}));
}

BoolExpr::Kind BoolExpr::kind() const { return node_->kind; }

const Atom& BoolExpr::atom_value() const { return node_->atom; }

const BoolExpr& BoolExpr::child() const { return *node_->a; }

const BoolExpr& BoolExpr::lhs() const { return *node_->a; }

const BoolExpr& BoolExpr::rhs() const { return *node_->b; }

bool BoolExpr::operator==(const BoolExpr& other) const {
  if (node_ == other.node_) return true;
  if (node_->kind != other.node_->kind) return false;
  switch (node_->kind) {
    case Kind::True:
    case Kind::False:
      return true;
    case Kind::Atom:
      return node_->atom == other.node_->atom;
    case Kind::Not:
      return child() == other.child();
    case Kind::And:
    case Kind::Or:
      return lhs() == other.lhs() && rhs() == other.rhs();
  }
  return false;
}

std::optional<std::string> atom_name_error(const Atom& atom) {
  auto check = [](const std::string& name,
                  const char* which) -> std::optional<std::string> {
    if (name.empty()) return std::string("empty ") + which + " name";
    if (name.front() == ' ' || name.back() == ' ')
      return std::string(which) + " name has surrounding whitespace";
    for (char ch : name) {
      if (ch == '{' || ch == '}')
        return std::string(which) + " name contains '" + ch + "'";
    }
    return std::nullopt;
  };
  if (auto e = check(atom.concept_name, "concept")) return e;
  if (atom.concept_name.find('.') != std::string::npos)
    return std::string("concept name contains '.'");
  return check(atom.state_name, "state");
}

namespace detail {

void skip_ws_and_comments(ExprCursor& c) {
  while (!c.at_end()) {
    char ch = c.peek();
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
      c.advance();
    } else if (ch == '#') {
      while (!c.at_end() && c.peek() != '\n') c.advance();
    } else {
      return;
    }
  }
}

namespace {

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n'))
    ++b;
  while (e > b &&
         (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n'))
    --e;
  return std::string(s.substr(b, e - b));
}

BoolExpr parse_or(ExprCursor& c);

BoolExpr parse_atom(ExprCursor& c) {
  int line = c.line, column = c.column;
  c.advance();  // "{"
  size_t body_begin = c.pos;
  while (!c.at_end() && c.peek() != '}') {
    if (c.peek() == '{') c.fail("'{' inside atom");
    c.advance();
  }
  if (c.at_end()) throw ParseError("unterminated atom", line, column);
  std::string_view body = c.text.substr(body_begin, c.pos - body_begin);
  c.advance();  // "}"

  size_t dot = body.rfind('.');
  if (dot == std::string_view::npos)
    throw ParseError("atom lacks '.' between concept and state", line, column);
  Atom atom{trim(body.substr(0, dot)), trim(body.substr(dot + 1))};
  if (auto err = atom_name_error(atom)) throw ParseError(*err, line, column);
  return BoolExpr::atom(std::move(atom));
}

bool at_word(const ExprCursor& c, std::string_view word) {
  if (!c.starts_with(word)) return false;
  size_t after = c.pos + word.size();
  if (after < c.text.size()) {
    char ch = c.text[after];
    if ((ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
        (ch >= '0' && ch <= '9') || ch == '_')
      return false;
  }
  return true;
}

BoolExpr parse_unary(ExprCursor& c);

BoolExpr parse_primary(ExprCursor& c) {
  skip_ws_and_comments(c);
  if (c.at_end()) c.fail("expected expression");
  char ch = c.peek();
  if (ch == '{') return parse_atom(c);
  if (ch == '(') {
    c.advance();
    BoolExpr inner = parse_or(c);
    skip_ws_and_comments(c);
    if (c.at_end() || c.peek() != ')') c.fail("expected ')'");
    c.advance();
    return inner;
  }
  if (at_word(c, "true")) {
    c.advance(4);
    return BoolExpr::constant(true);
  }
  if (at_word(c, "false")) {
    c.advance(5);
    return BoolExpr::constant(false);
  }
  c.fail("expected expression");
}

BoolExpr parse_unary(ExprCursor& c) {
  skip_ws_and_comments(c);
  if (c.at_end()) c.fail("expected expression");
  if (c.peek() == '!') {
    c.advance();
    return BoolExpr::negation(parse_unary(c));
  }
  if (c.starts_with("¬")) {  // input alias for "!"
    c.advance(2);
    return BoolExpr::negation(parse_unary(c));
  }
  return parse_primary(c);
}

BoolExpr parse_and(ExprCursor& c) {
  BoolExpr e = parse_unary(c);
  for (;;) {
    skip_ws_and_comments(c);
    if (c.at_end() || c.peek() != '&') return e;
    c.advance();
    e = BoolExpr::conjunction(std::move(e), parse_unary(c));
  }
}

BoolExpr parse_or(ExprCursor& c) {
  BoolExpr e = parse_and(c);
  for (;;) {
    skip_ws_and_comments(c);
    if (c.at_end() || c.peek() != '|') return e;
    c.advance();
    e = BoolExpr::disjunction(std::move(e), parse_and(c));
  }
}

}  // namespace

BoolExpr parse_expr_prefix(ExprCursor& c) { return parse_or(c); }

}  // namespace detail

BoolExpr parse_expr(std::string_view text) {
  detail::ExprCursor c{text};
  BoolExpr e = detail::parse_expr_prefix(c);
  detail::skip_ws_and_comments(c);
  if (!c.at_end()) c.fail("unexpected trailing input");
  return e;
}

std::string canonical(const BoolExpr& e) {
  switch (e.kind()) {
    case BoolExpr::Kind::True:
      return "true";
    case BoolExpr::Kind::False:
      return "false";
    case BoolExpr::Kind::Atom:
      return to_string(e.atom_value());
    case BoolExpr::Kind::Not:
      return "!(" + canonical(e.child()) + ")";
    case BoolExpr::Kind::And:
      return "(" + canonical(e.lhs()) + " & " + canonical(e.rhs()) + ")";
    case BoolExpr::Kind::Or:
      return "(" + canonical(e.lhs()) + " | " + canonical(e.rhs()) + ")";
  }
  return {};
}

namespace {

void collect_atoms(const BoolExpr& e, std::set<Atom>& out) {
  switch (e.kind()) {
    case BoolExpr::Kind::True:
    case BoolExpr::Kind::False:
      return;
    case BoolExpr::Kind::Atom:
      out.insert(e.atom_value());
      return;
    case BoolExpr::Kind::Not:
      collect_atoms(e.child(), out);
      return;
    case BoolExpr::Kind::And:
    case BoolExpr::Kind::Or:
      collect_atoms(e.lhs(), out);
      collect_atoms(e.rhs(), out);
      return;
  }
}

}  // namespace

std::set<Atom> atoms_of(const BoolExpr& e) {
  std::set<Atom> out;
  collect_atoms(e, out);
  return out;
}

bool evaluate(const BoolExpr& e,
              const std::function<std::optional<bool>(const Atom&)>& lookup) {
  switch (e.kind()) {
    case BoolExpr::Kind::True:
      return true;
    case BoolExpr::Kind::False:
      return false;
    case BoolExpr::Kind::Atom: {
      auto v = lookup(e.atom_value());
      if (!v) throw MissingAtomError(e.atom_value());
      return *v;
    }
    case BoolExpr::Kind::Not:
      return !evaluate(e.child(), lookup);
    case BoolExpr::Kind::And: {
      // Both sides evaluate so a missing atom surfaces even when the
      // left side already decides the result.
      bool l = evaluate(e.lhs(), lookup);
      bool r = evaluate(e.rhs(), lookup);
      return l && r;
    }
    case BoolExpr::Kind::Or: {
      bool l = evaluate(e.lhs(), lookup);
      bool r = evaluate(e.rhs(), lookup);
      return l || r;
    }
  }
  return false;
}

bool evaluate(const BoolExpr& e, const std::map<Atom, bool>& valuation) {
  return evaluate(e, [&](const Atom& a) -> std::optional<bool> {
    auto it = valuation.find(a);
    if (it == valuation.end()) return std::nullopt;
    return it->second;
  });
}

BoolExpr conjoin(const std::vector<BoolExpr>& formulas) {
  if (formulas.empty()) return BoolExpr::constant(true);
  BoolExpr out = formulas.front();
  for (size_t i = 1; i < formulas.size(); ++i)
    out = BoolExpr::conjunction(std::move(out), formulas[i]);
  return out;
}

}  // namespace reqtest
