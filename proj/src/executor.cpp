#include "reqtest/executor.hpp"

#include <charconv>

#include "csv.hpp"

namespace reqtest {

std::set<Atom> Trace::atom_set() const {
  return std::set<Atom>(atom_columns.begin(), atom_columns.end());
}

Verdict Verdict::pass(bool released) {
  Verdict v;
  v.kind = Kind::Pass;
  v.released = released;
  return v;
}

Verdict Verdict::fail(int step, double time, BoolExpr violated) {
  Verdict v;
  v.kind = Kind::Fail;
  v.step = step;
  v.time = time;
  v.violated = std::move(violated);
  return v;
}

Verdict Verdict::not_triggered() { return Verdict{}; }

std::string to_string(const Verdict& v) {
  switch (v.kind) {
    case Verdict::Kind::Pass:
      return std::string("Pass(released=") + (v.released ? "true" : "false") + ")";
    case Verdict::Kind::Fail:
      return "Fail(step_index=" + std::to_string(v.step + 1) +
             ", time=" + detail::format_double(v.time) +
             ", condition=" + (v.violated ? canonical(*v.violated) : "?") + ")";
    case Verdict::Kind::NotTriggered:
      return "NotTriggered";
  }
  return {};
}

Verdict execute(const TestCase& tc, const Trace& trace) {
  if (tc.steps.empty()) throw Error("test case '" + tc.id + "' has no steps");

  std::map<Atom, size_t> column;
  for (size_t i = 0; i < trace.atom_columns.size(); ++i)
    column[trace.atom_columns[i]] = i;
  for (const auto& step : tc.steps) {
    auto require_atoms = [&](const BoolExpr& e) {
      for (const auto& atom : atoms_of(e))
        if (!column.count(atom))
          throw Error("trace lacks atom " + to_string(atom) +
                      " needed by test case '" + tc.id + "'");
    };
    require_atoms(step.pre);
    if (step.post) require_atoms(*step.post);
  }

  auto holds = [&](const BoolExpr& e, const Sample& s) {
    return evaluate(e, [&](const Atom& a) -> std::optional<bool> {
      auto it = column.find(a);
      if (it == column.end()) return std::nullopt;
      return s.atom_values[it->second] != 0;
    });
  };

  size_t k = 0;
  for (; k < trace.samples.size(); ++k)
    if (holds(tc.steps[0].pre, trace.samples[k])) break;
  if (k == trace.samples.size()) return Verdict::not_triggered();

  const size_t n = tc.steps.size();
  if (n == 1) return Verdict::pass(true);

  // Advancement runs before the post-condition check at every sample,
  // the activation sample included, and may chain through several steps
  // within one sample.
  size_t active = 0;
  for (; k < trace.samples.size(); ++k) {
    const Sample& s = trace.samples[k];
    while (active + 1 < n && holds(tc.steps[active + 1].pre, s)) {
      ++active;
      if (active == n - 1) return Verdict::pass(true);
    }
    const auto& post = tc.steps[active].post;
    if (post && !holds(*post, s))
      return Verdict::fail(static_cast<int>(active), s.time, *post);
  }
  return Verdict::pass(false);
}

namespace {

// Condition cells are always quoted so the null marker is visually
// distinct from any expression.
std::string condition_cell(const BoolExpr& e) {
  std::string content = "(" + canonical(e) + ")";
  std::string out = "\"";
  for (char ch : content) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += "\"";
  return out;
}

double parse_double_cell(const std::string& cell, const std::string& what) {
  double value = 0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [end, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || end != last)
    throw Error(what + " is not a number: '" + cell + "'");
  return value;
}

}  // namespace

std::string export_csv(const std::vector<TestCase>& tcs) {
  std::string out = "test_case_id,step_index,pre_condition,post_condition\n";
  for (const auto& tc : tcs) {
    for (size_t i = 0; i < tc.steps.size(); ++i) {
      const TestStep& step = tc.steps[i];
      out += detail::csv_cell(tc.id);
      out += ',';
      out += std::to_string(i + 1);
      out += ',';
      out += condition_cell(step.pre);
      out += ',';
      out += step.post ? condition_cell(*step.post) : std::string("null");
      out += '\n';
    }
  }
  return out;
}

std::vector<TestCase> import_csv(const std::string& text) {
  auto rows = detail::parse_csv(text);
  if (rows.empty()) throw Error("test-case CSV is empty");
  const std::vector<std::string> header = {"test_case_id", "step_index",
                                           "pre_condition", "post_condition"};
  if (rows[0] != header)
    throw Error("test-case CSV header must be "
                "'test_case_id,step_index,pre_condition,post_condition'");

  auto parse_condition = [](const std::string& cell, size_t row_number) {
    try {
      return parse_expr(cell);
    } catch (const ParseError& e) {
      throw Error("row " + std::to_string(row_number) +
                  ": unparseable condition: " + e.what());
    }
  };

  std::vector<TestCase> out;
  std::set<std::string> finished;
  for (size_t rn = 1; rn < rows.size(); ++rn) {
    const auto& row = rows[rn];
    const std::string row_label = "row " + std::to_string(rn + 1);
    if (row.size() != 4)
      throw Error(row_label + " has " + std::to_string(row.size()) +
                  " cells, expected 4");

    const std::string& id = row[0];
    int idx = 0;
    {
      const char* first = row[1].data();
      const char* last = row[1].data() + row[1].size();
      auto [end, ec] = std::from_chars(first, last, idx);
      if (ec != std::errc() || end != last || idx < 1)
        throw Error(row_label + " has a malformed step_index '" + row[1] + "'");
    }

    if (out.empty() || out.back().id != id) {
      if (!out.empty()) finished.insert(out.back().id);
      if (finished.count(id))
        throw Error("rows of test case '" + id + "' are not consecutive");
      if (idx != 1)
        throw Error("test case '" + id + "' starts at step_index " +
                    std::to_string(idx) + ", expected 1");
      out.push_back(TestCase{id, {}});
    } else {
      if (idx != static_cast<int>(out.back().steps.size()) + 1)
        throw Error(row_label + ": step_index " + std::to_string(idx) +
                    " out of sequence in test case '" + id + "'");
      if (!out.back().steps.back().post)
        throw Error("null post-condition before the final step of '" + id + "'");
    }

    TestStep step{parse_condition(row[2], rn + 1),
                  row[3] == "null"
                      ? std::nullopt
                      : std::optional<BoolExpr>(parse_condition(row[3], rn + 1))};
    out.back().steps.push_back(std::move(step));
  }
  return out;
}

std::string save_trace_csv(const Trace& trace) {
  std::string out = "time";
  for (const auto& atom : trace.atom_columns)
    out += "," + detail::csv_cell(to_string(atom));
  for (const auto& name : trace.analog_columns)
    out += "," + detail::csv_cell("num:" + name);
  out += '\n';
  for (size_t i = 0; i < trace.samples.size(); ++i) {
    const Sample& s = trace.samples[i];
    if (s.atom_values.size() != trace.atom_columns.size() ||
        s.analog_values.size() != trace.analog_columns.size())
      throw Error("sample " + std::to_string(i) +
                  " does not match the trace columns");
    out += detail::format_double(s.time);
    for (auto v : s.atom_values) out += v ? ",1" : ",0";
    for (auto v : s.analog_values) out += "," + detail::format_double(v);
    out += '\n';
  }
  return out;
}

Trace load_trace_csv(const std::string& text) {
  auto rows = detail::parse_csv(text);
  if (rows.empty()) throw Error("trace CSV is empty");
  const auto& header = rows[0];
  if (header.empty() || header[0] != "time")
    throw Error("trace CSV header must start with 'time'");

  Trace t;
  struct Col {
    bool is_atom;
    size_t index;
  };
  std::vector<Col> cols;
  for (size_t i = 1; i < header.size(); ++i) {
    const std::string& cell = header[i];
    if (cell.rfind("num:", 0) == 0) {
      cols.push_back({false, t.analog_columns.size()});
      t.analog_columns.push_back(cell.substr(4));
      continue;
    }
    try {
      BoolExpr e = parse_expr(cell);
      if (e.kind() != BoolExpr::Kind::Atom) throw Error("not an atom");
      cols.push_back({true, t.atom_columns.size()});
      t.atom_columns.push_back(e.atom_value());
    } catch (const Error&) {
      throw Error("trace header column " + std::to_string(i + 1) +
                  " is neither an atom nor 'num:<name>': '" + cell + "'");
    }
  }

  for (size_t rn = 1; rn < rows.size(); ++rn) {
    const auto& row = rows[rn];
    const std::string row_label = "row " + std::to_string(rn + 1);
    if (row.size() != header.size())
      throw Error(row_label + " has " + std::to_string(row.size()) +
                  " cells, expected " + std::to_string(header.size()));

    Sample s;
    s.time = parse_double_cell(row[0], row_label + " time");
    if (!t.samples.empty() && s.time <= t.samples.back().time)
      throw Error("time is not strictly increasing at " + row_label);
    s.atom_values.resize(t.atom_columns.size());
    s.analog_values.resize(t.analog_columns.size());
    for (size_t j = 1; j < row.size(); ++j) {
      const Col& col = cols[j - 1];
      const std::string& cell = row[j];
      if (col.is_atom) {
        if (cell == "0") s.atom_values[col.index] = 0;
        else if (cell == "1") s.atom_values[col.index] = 1;
        else
          throw Error("non-binary atom cell at " + row_label + ", column " +
                      std::to_string(j + 1) + ": '" + cell + "'");
      } else {
        s.analog_values[col.index] =
            parse_double_cell(cell, row_label + " column " + std::to_string(j + 1));
      }
    }
    t.samples.push_back(std::move(s));
  }
  return t;
}

SuiteReport run_suite(const std::vector<TestCase>& tcs,
                      const std::map<std::string, Trace>& traces) {
  SuiteReport rep;
  for (const auto& tc : tcs) {
    for (const auto& [name, trace] : traces) {
      SuiteCell cell{tc.id, name, std::nullopt, ""};
      try {
        Verdict v = execute(tc, trace);
        switch (v.kind) {
          case Verdict::Kind::Pass: ++rep.pass; break;
          case Verdict::Kind::Fail: ++rep.fail; break;
          case Verdict::Kind::NotTriggered: ++rep.not_triggered; break;
        }
        cell.verdict = std::move(v);
      } catch (const Error& e) {
        cell.error = e.what();
        ++rep.errors;
      }
      rep.cells.push_back(std::move(cell));
    }
  }
  return rep;
}

}  // namespace reqtest
