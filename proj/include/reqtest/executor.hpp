// Test-case execution over time-indexed traces, plus the two
// comma-delimited interchange formats: test-case CSV and trace CSV.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "reqtest/testgen.hpp"

namespace reqtest {

struct Sample {
  double time = 0;
  std::vector<std::uint8_t> atom_values;  // parallel to Trace::atom_columns
  std::vector<double> analog_values;      // parallel to Trace::analog_columns
  bool operator==(const Sample&) const = default;
};

// Time-ordered atom valuations plus analog signals. Every sample carries
// one value per column; times are strictly increasing.
struct Trace {
  std::vector<Atom> atom_columns;
  std::vector<std::string> analog_columns;
  std::vector<Sample> samples;
  bool operator==(const Trace&) const = default;

  std::set<Atom> atom_set() const;
};

// Outcome of one test case over one trace. Fail's step is the 0-based
// index of the violated step; display adds one to match the CSV
// step_index convention.
struct Verdict {
  enum class Kind { Pass, Fail, NotTriggered };

  Kind kind = Kind::NotTriggered;
  bool released = false;             // Pass only
  int step = -1;                     // Fail only
  double time = 0;                   // Fail only
  std::optional<BoolExpr> violated;  // Fail only

  static Verdict pass(bool released);
  static Verdict fail(int step, double time, BoolExpr violated);
  static Verdict not_triggered();
  bool operator==(const Verdict&) const = default;
};

std::string to_string(const Verdict& v);

// Scan semantics: the first sample satisfying step 1's pre-condition
// activates the test (no sample does: NotTriggered). From that sample on,
// each sample first advances through any steps whose pre-condition holds
// (reaching the final step completes the test: Pass released). When no
// advance applies, the active step's post-condition must hold, else Fail
// at that sample. A trace that ends mid-test passes unreleased. Throws
// when the test mentions atoms outside the trace.
Verdict execute(const TestCase& tc, const Trace& trace);

// Header "test_case_id,step_index,pre_condition,post_condition"; one row
// per step; conditions rendered "(<canonical>)" and always quoted, the
// missing final post-condition as a bare null. LF line endings.
std::string export_csv(const std::vector<TestCase>& tcs);

// Inverse of export_csv; rows of one test case are consecutive with
// step_index counting from 1, null only on the last.
std::vector<TestCase> import_csv(const std::string& text);

// Header "time", then one column per atom (canonical atom text) and per
// analog ("num:" + name); atom cells are 0/1, numbers shortest-form.
std::string save_trace_csv(const Trace& trace);

// Inverse of save_trace_csv; enforces strictly increasing time, binary
// atom cells, and per-row arity.
Trace load_trace_csv(const std::string& text);

struct SuiteCell {
  std::string test_case_id;
  std::string trace_name;
  std::optional<Verdict> verdict;  // empty when the cell errored
  std::string error;               // nonempty when the cell errored
  bool operator==(const SuiteCell&) const = default;
};

struct SuiteReport {
  std::vector<SuiteCell> cells;  // test-case order, then trace-name order
  int pass = 0;
  int fail = 0;
  int not_triggered = 0;
  int errors = 0;
  bool operator==(const SuiteReport&) const = default;
};

// Runs every test case over every trace; per-cell failures are recorded
// in the report, never thrown.
SuiteReport run_suite(const std::vector<TestCase>& tcs,
                      const std::map<std::string, Trace>& traces);

}  // namespace reqtest
