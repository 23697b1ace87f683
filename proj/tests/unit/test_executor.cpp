// Verdict semantics over traces, the two CSV formats, and suite runs.

#include <map>

#include "doctest.h"
#include "reqtest/errors.hpp"
#include "reqtest/executor.hpp"
#include "reqtest/testgen.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace reqtest;
using testsupport::Rng;

namespace {

const Atom kNormalOp{"System", "normal system operation"};
const Atom kUnderflows{"Feedwater Tank", "underflows"};
const Atom kRaised{"FeedWater Alarm", "raised"};

// Rows are atom valuations in column order; sample k sits at time k/4.
Trace make_trace(std::vector<Atom> atoms, std::vector<std::vector<int>> rows) {
  Trace t;
  t.atom_columns = std::move(atoms);
  for (size_t i = 0; i < rows.size(); ++i) {
    Sample s;
    s.time = 0.25 * static_cast<double>(i);
    for (int v : rows[i])
      s.atom_values.push_back(static_cast<std::uint8_t>(v ? 1 : 0));
    t.samples.push_back(std::move(s));
  }
  return t;
}

TestCase never_underflow_case() {
  return generate(testsupport::never_underflow_requirement(), kDefaultMaxDepth,
                  kDefaultMaxTransitionRepeat, 1)
      .at(0);
}

}  // namespace

TEST_CASE("a trace that never releases passes as unreleased") {
  const Trace t = make_trace({kNormalOp, kUnderflows},
                             {{1, 0}, {1, 0}, {1, 0}, {1, 0}});
  const Verdict v = execute(never_underflow_case(), t);
  CHECK(v.kind == Verdict::Kind::Pass);
  CHECK_FALSE(v.released);
  CHECK(to_string(v) == "Pass(released=false)");
}

TEST_CASE("reaching the release condition passes as released") {
  const Trace t = make_trace({kNormalOp, kUnderflows},
                             {{1, 0}, {1, 0}, {1, 1}});
  const Verdict v = execute(never_underflow_case(), t);
  CHECK(v.kind == Verdict::Kind::Pass);
  CHECK(v.released);
}

TEST_CASE("a trace that never activates the first step is not triggered") {
  const Trace t = make_trace({kNormalOp, kUnderflows}, {{0, 0}, {0, 1}});
  const Verdict v = execute(never_underflow_case(), t);
  CHECK(v.kind == Verdict::Kind::NotTriggered);
  CHECK(to_string(v) == "NotTriggered");

  const Trace empty = make_trace({kNormalOp, kUnderflows}, {});
  CHECK(execute(never_underflow_case(), empty).kind ==
        Verdict::Kind::NotTriggered);
}

TEST_CASE("activation can happen after an inactive prefix") {
  const Trace t = make_trace({kNormalOp, kUnderflows},
                             {{0, 1}, {0, 0}, {1, 0}, {1, 1}});
  CHECK(execute(never_underflow_case(), t).released);
}

TEST_CASE("a violated step condition fails with step, time, and condition") {
  TestCase tc;
  tc.id = "RA_TC1_V1";
  const BoolExpr no_alarm = BoolExpr::negation(BoolExpr::atom(kRaised));
  tc.steps = {{BoolExpr::atom(kNormalOp), no_alarm},
              {BoolExpr::negation(BoolExpr::atom(kNormalOp)), std::nullopt}};
  const Trace t = make_trace({kNormalOp, kRaised},
                             {{1, 0}, {1, 0}, {1, 0}, {1, 1}});
  const Verdict v = execute(tc, t);
  REQUIRE(v.kind == Verdict::Kind::Fail);
  CHECK(v.step == 0);
  CHECK(v.time == 0.75);
  REQUIRE(v.violated.has_value());
  CHECK(*v.violated == no_alarm);
  CHECK(to_string(v) ==
        "Fail(step_index=1, time=0.75, condition=!({FeedWater Alarm.raised}))");
}

TEST_CASE("advancement runs before the violation check at the same sample") {
  // At sample 2 the stay condition breaks exactly when the release
  // condition comes true; advancing first turns this into a release.
  const Trace t = make_trace({kNormalOp, kUnderflows}, {{1, 0}, {1, 1}});
  CHECK(execute(never_underflow_case(), t).released);
}

TEST_CASE("advancement applies at the activation sample itself") {
  const Trace t = make_trace({kNormalOp, kUnderflows}, {{1, 1}});
  const Verdict v = execute(never_underflow_case(), t);
  CHECK(v.kind == Verdict::Kind::Pass);
  CHECK(v.released);
}

TEST_CASE("advancement chains through several steps in one sample") {
  const Atom a{"C", "a"}, b{"C", "b"}, c{"C", "c"};
  TestCase tc;
  tc.id = "RC_TC1_V1";
  tc.steps = {{BoolExpr::atom(a), BoolExpr::constant(false)},
              {BoolExpr::atom(b), BoolExpr::constant(false)},
              {BoolExpr::atom(c), std::nullopt}};
  const Trace t = make_trace({a, b, c}, {{1, 1, 1}});
  CHECK(execute(tc, t).released);
}

TEST_CASE("a partially advanced test passes unreleased at trace end") {
  const Atom a{"C", "a"}, b{"C", "b"}, c{"C", "c"};
  TestCase tc;
  tc.id = "RC_TC1_V1";
  tc.steps = {{BoolExpr::atom(a), BoolExpr::constant(true)},
              {BoolExpr::atom(b), BoolExpr::constant(true)},
              {BoolExpr::atom(c), std::nullopt}};
  const Trace t = make_trace({a, b, c}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 0}});
  const Verdict v = execute(tc, t);
  CHECK(v.kind == Verdict::Kind::Pass);
  CHECK_FALSE(v.released);
}

TEST_CASE("a one-step test releases at its activation sample") {
  TestCase tc;
  tc.id = "R1_TC1_V1";
  tc.steps = {{BoolExpr::atom(kUnderflows), std::nullopt}};
  const Trace t = make_trace({kUnderflows}, {{0}, {1}});
  CHECK(execute(tc, t).released);
}

TEST_CASE("execution guards its inputs") {
  CHECK_THROWS_AS(execute(TestCase{"R_TC1_V1", {}},
                          make_trace({kNormalOp}, {{1}})),
                  Error);
  try {
    execute(never_underflow_case(), make_trace({kNormalOp}, {{1}}));
    FAIL("expected Error");
  } catch (const Error& e) {
    const std::string what = e.what();
    CHECK(what.find("{Feedwater Tank.underflows}") != std::string::npos);
    CHECK(what.find("R1_3_TC1_V1") != std::string::npos);
  }
}

TEST_CASE("a false entry condition is never triggered") {
  Rng rng(5);
  TestCase tc;
  tc.id = "RV_TC1_V1";
  tc.steps = {{BoolExpr::constant(false), BoolExpr::constant(true)},
              {BoolExpr::constant(true), std::nullopt}};
  for (int i = 0; i < 30; ++i) {
    const Trace t = testsupport::random_trace(rng);
    CHECK(execute(tc, t).kind == Verdict::Kind::NotTriggered);
  }
}

TEST_CASE("tautological step conditions never fail") {
  Rng rng(6);
  TestCase tc;
  tc.id = "RT_TC1_V1";
  tc.steps = {{BoolExpr::constant(true), BoolExpr::constant(true)},
              {BoolExpr::constant(false), std::nullopt}};
  for (int i = 0; i < 30; ++i) {
    const Trace t = testsupport::random_trace(rng);
    const Verdict v = execute(tc, t);
    CHECK(v.kind != Verdict::Kind::Fail);
    if (!t.samples.empty()) {
      CHECK(v.kind == Verdict::Kind::Pass);
      CHECK_FALSE(v.released);
    }
  }
}

TEST_CASE("execution is deterministic") {
  const TestCase tc = never_underflow_case();
  const Trace t = make_trace({kNormalOp, kUnderflows}, {{1, 0}, {1, 1}});
  CHECK(to_string(execute(tc, t)) == to_string(execute(tc, t)));
}

TEST_CASE("exporting the worked example writes the frozen layout") {
  const std::string csv = export_csv({never_underflow_case()});
  CHECK(csv ==
        "test_case_id,step_index,pre_condition,post_condition\n"
        "R1_3_TC1_V1,1,\"({System.normal system operation})\","
        "\"(!({Feedwater Tank.underflows}))\"\n"
        "R1_3_TC1_V1,2,\"({Feedwater Tank.underflows})\",null\n");
}

TEST_CASE("exporting no test cases leaves just the header") {
  CHECK(export_csv({}) ==
        "test_case_id,step_index,pre_condition,post_condition\n");
}

TEST_CASE("import reads back what export wrote") {
  Rng rng(11);
  std::vector<TestCase> cases;
  for (int i = 0; i < 40; ++i)
    cases.push_back(testsupport::random_test_case(rng, i));
  CHECK(import_csv(export_csv(cases)) == cases);
}

TEST_CASE("import rejects malformed test-case files") {
  CHECK_THROWS_AS(import_csv(""), Error);
  CHECK_THROWS_AS(import_csv("id,step,pre,post\n"), Error);

  const std::string header =
      "test_case_id,step_index,pre_condition,post_condition\n";
  CHECK_THROWS_AS(import_csv(header + "A_TC1_V1,1,true\n"), Error);
  CHECK_THROWS_AS(import_csv(header + "A_TC1_V1,0,true,null\n"), Error);
  CHECK_THROWS_AS(import_csv(header + "A_TC1_V1,2,true,null\n"), Error);
  CHECK_THROWS_AS(import_csv(header + "A_TC1_V1,1,true,true\n" +
                             "A_TC1_V1,3,true,null\n"),
                  Error);
  // The null marker closes a case; more steps may not follow it.
  CHECK_THROWS_AS(import_csv(header + "A_TC1_V1,1,true,null\n" +
                             "A_TC1_V1,2,true,null\n"),
                  Error);
  // Rows of one case must sit together.
  CHECK_THROWS_AS(import_csv(header + "A_TC1_V1,1,true,null\n" +
                             "B_TC1_V1,1,true,null\n" +
                             "A_TC1_V1,1,true,null\n"),
                  Error);
  try {
    import_csv(header + "A_TC1_V1,1,not an expression,null\n");
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
}

TEST_CASE("trace files carry atoms as columns and analogs with a num prefix") {
  Trace t;
  t.atom_columns = {kUnderflows};
  t.analog_columns = {"level"};
  t.samples = {{0.0, {0}, {50.0}}, {0.1, {1}, {9.5}}};
  const std::string csv = save_trace_csv(t);
  CHECK(csv ==
        "time,{Feedwater Tank.underflows},num:level\n"
        "0,0,50\n"
        "0.1,1,9.5\n");
  const Trace back = load_trace_csv(csv);
  CHECK(back.atom_columns == t.atom_columns);
  CHECK(back.analog_columns == t.analog_columns);
  REQUIRE(back.samples.size() == 2);
  CHECK(back.samples[1].time == 0.1);
  CHECK(back.samples[1].atom_values == std::vector<std::uint8_t>{1});
  CHECK(back.samples[1].analog_values == std::vector<double>{9.5});
}

TEST_CASE("trace columns may interleave atoms and analogs") {
  const Trace t = load_trace_csv(
      "time,num:level,\"{C.a}\",num:flow,\"{C.b}\"\n"
      "0,1.5,0,2.5,1\n");
  CHECK(t.analog_columns == std::vector<std::string>{"level", "flow"});
  CHECK(t.atom_columns == std::vector<Atom>{Atom{"C", "a"}, Atom{"C", "b"}});
  CHECK(t.samples[0].analog_values == std::vector<double>{1.5, 2.5});
  CHECK(t.samples[0].atom_values == std::vector<std::uint8_t>{0, 1});
}

TEST_CASE("trace loading rejects malformed files") {
  CHECK_THROWS_AS(load_trace_csv(""), Error);
  CHECK_THROWS_AS(load_trace_csv("clock,num:x\n"), Error);
  CHECK_THROWS_AS(load_trace_csv("time,velocity\n"), Error);
  CHECK_THROWS_AS(load_trace_csv("time,num:x\n0,1\n0,2\n"), Error);
  CHECK_THROWS_AS(load_trace_csv("time,num:x\n1,1\n0.5,2\n"), Error);
  CHECK_THROWS_AS(load_trace_csv("time,\"{C.a}\"\n0,2\n"), Error);
  CHECK_THROWS_AS(load_trace_csv("time,num:x\n0,1,5\n"), Error);
  CHECK_THROWS_AS(load_trace_csv("time,num:x\nzero,1\n"), Error);
  try {
    load_trace_csv("time,num:x\n0,1\n1,oops\n");
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
}

TEST_CASE("trace save then load is the identity") {
  Rng rng(21);
  for (int i = 0; i < 100; ++i) {
    const Trace t = testsupport::random_trace(rng);
    const Trace back = load_trace_csv(save_trace_csv(t));
    CHECK(back.atom_columns == t.atom_columns);
    CHECK(back.analog_columns == t.analog_columns);
    REQUIRE(back.samples.size() == t.samples.size());
    for (size_t s = 0; s < t.samples.size(); ++s) {
      CHECK(back.samples[s].time == t.samples[s].time);
      CHECK(back.samples[s].atom_values == t.samples[s].atom_values);
      CHECK(back.samples[s].analog_values == t.samples[s].analog_values);
    }
  }
}

TEST_CASE("a suite run crosses every test case with every trace") {
  TestCase one;
  one.id = "R1_TC1_V1";
  one.steps = {{BoolExpr::atom(kNormalOp), std::nullopt}};
  TestCase two;
  two.id = "R2_TC1_V1";
  two.steps = {{BoolExpr::atom(kRaised), std::nullopt}};

  std::map<std::string, Trace> traces;
  traces["b_trace"] = make_trace({kNormalOp}, {{1}});
  traces["a_trace"] = make_trace({kNormalOp}, {{0}});

  const SuiteReport rep = run_suite({one, two}, traces);
  REQUIRE(rep.cells.size() == 4);
  CHECK(rep.cells[0].test_case_id == "R1_TC1_V1");
  CHECK(rep.cells[0].trace_name == "a_trace");
  CHECK(rep.cells[1].trace_name == "b_trace");
  CHECK(rep.cells[2].test_case_id == "R2_TC1_V1");

  CHECK(rep.pass == 1);
  CHECK(rep.not_triggered == 1);
  CHECK(rep.fail == 0);
  // Both cells of the second case lack the alarm atom.
  CHECK(rep.errors == 2);
  CHECK(rep.cells[2].verdict == std::nullopt);
  CHECK(rep.cells[2].error.find("{FeedWater Alarm.raised}") !=
        std::string::npos);
}

TEST_CASE("an empty suite reports nothing") {
  const SuiteReport rep = run_suite({}, {});
  CHECK(rep.cells.empty());
  CHECK(rep.pass + rep.fail + rep.not_triggered + rep.errors == 0);
}
