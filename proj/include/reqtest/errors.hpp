#pragma once

#include <stdexcept>
#include <string>

namespace reqtest {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Syntax error in expression, RSL, or CSV text. Positions are 1-based.
struct ParseError : Error {
  int line;
  int column;
  ParseError(const std::string& msg, int line_, int column_)
      : Error(msg + " (line " + std::to_string(line_) + ", column " +
              std::to_string(column_) + ")"),
        line(line_),
        column(column_) {}
};

// A structured document (ontology JSON, params, scenario) that does not
// match its schema; `path` points at the offending element.
struct SchemaError : Error {
  std::string path;
  SchemaError(const std::string& msg, std::string path_)
      : Error(msg + " at " + path_), path(std::move(path_)) {}
};

}  // namespace reqtest
