// Internal cursor shared by the expression and requirement parsers.
// Tracks 1-based line/column over a single in-memory text.

#pragma once

#include <string_view>

#include "reqtest/errors.hpp"
#include "reqtest/expr.hpp"

namespace reqtest::detail {

struct ExprCursor {
  std::string_view text;
  size_t pos = 0;
  int line = 1;
  int column = 1;

  bool at_end() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  bool starts_with(std::string_view s) const {
    return text.substr(pos, s.size()) == s;
  }

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
    ++pos;
  }

  void advance(size_t n) {
    for (size_t i = 0; i < n; ++i) advance();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, column);
  }
};

// Skips whitespace and "#"-to-end-of-line comments.
void skip_ws_and_comments(ExprCursor& c);

// Parses one expression starting at the cursor and stops at the first
// token that cannot extend it; the cursor is left on that token.
BoolExpr parse_expr_prefix(ExprCursor& c);

}  // namespace reqtest::detail
