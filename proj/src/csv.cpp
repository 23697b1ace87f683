#include "csv.hpp"

#include <charconv>

#include "reqtest/errors.hpp"

namespace reqtest::detail {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool in_quotes = false;
  bool row_started = false;
  size_t i = 0;

  auto end_row = [&] {
    row.push_back(std::move(cell));
    cell.clear();
    rows.push_back(std::move(row));
    row.clear();
    row_started = false;
  };

  while (i < text.size()) {
    char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          i += 2;
        } else {
          in_quotes = false;
          ++i;
        }
      } else {
        cell += ch;
        ++i;
      }
      continue;
    }
    switch (ch) {
      case '"':
        in_quotes = true;
        row_started = true;
        ++i;
        break;
      case ',':
        row.push_back(std::move(cell));
        cell.clear();
        row_started = true;
        ++i;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') {
          end_row();
          i += 2;
        } else {
          cell += ch;
          ++i;
        }
        break;
      case '\n':
        end_row();
        ++i;
        break;
      default:
        cell += ch;
        row_started = true;
        ++i;
        break;
    }
  }
  if (in_quotes) throw Error("unterminated quoted CSV cell");
  if (row_started || !cell.empty() || !row.empty()) end_row();
  return rows;
}

std::string csv_cell(const std::string& value) {
  bool needs_quotes = false;
  for (char ch : value) {
    if (ch == ',' || ch == '"' || ch == '\n' || ch == '\r') {
      needs_quotes = true;
      break;
    }
  }
  if (!needs_quotes) return value;
  std::string out = "\"";
  for (char ch : value) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += "\"";
  return out;
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("number formatting failed");
  return std::string(buf, end);
}

}  // namespace reqtest::detail
