// Hand-built fixtures mirroring the bundled feedwater-tank project, for
// tests that should not depend on files on disk.

#pragma once

#include "reqtest/ontology.hpp"
#include "reqtest/rsl.hpp"

namespace reqtest::testsupport {

// The coarse tank ontology: System contains Feedwater Tank and FeedWater
// Alarm; four has-state arcs induce the four stage-1 atoms.
inline Ontology tank_ontology() {
  Ontology o;
  o.vertex_labels = {"concept", "state"};
  o.arc_labels = {"contains", "has-state"};
  for (const char* id : {"System", "Feedwater Tank", "FeedWater Alarm"})
    o.vertices[id] = {{"concept"}};
  for (const char* id :
       {"normal system operation", "underflows", "overflows", "raised"})
    o.vertices[id] = {{"state"}};
  o.arcs["contains:System->Feedwater Tank"] = {"System", "Feedwater Tank", {"contains"}};
  o.arcs["contains:System->FeedWater Alarm"] = {"System", "FeedWater Alarm", {"contains"}};
  o.arcs["has-state:System->normal system operation"] =
      {"System", "normal system operation", {"has-state"}};
  o.arcs["has-state:Feedwater Tank->underflows"] =
      {"Feedwater Tank", "underflows", {"has-state"}};
  o.arcs["has-state:Feedwater Tank->overflows"] =
      {"Feedwater Tank", "overflows", {"has-state"}};
  o.arcs["has-state:FeedWater Alarm->raised"] =
      {"FeedWater Alarm", "raised", {"has-state"}};
  return o;
}

inline Boilerplate never_boilerplate() {
  return Boilerplate{"B1",
                     {{"trigger", SlotKind::State},
                      {"sys", SlotKind::System},
                      {"bad", SlotKind::State}},
                     "never"};
}

// The single-state never-underflow requirement the worked example
// generates R1_3_TC1_V1 from.
inline Requirement never_underflow_requirement() {
  const BoolExpr trigger =
      BoolExpr::atom(Atom{"System", "normal system operation"});
  const BoolExpr bad = BoolExpr::atom(Atom{"Feedwater Tank", "underflows"});
  Requirement r;
  r.id = "R1_3";
  r.ontology_stage = 1;
  r.states = {"rs_0"};
  r.stay["rs_0"] = {BoolExpr::negation(bad)};
  r.entry_conditions = {trigger};
  r.release_conditions = {{"rs_0", bad}};
  return r;
}

}  // namespace reqtest::testsupport
