// Requirement specification language: boilerplate templates instantiated
// from the ontology, explicit requirement state machines, and the textual
// form both are read from and written to.
//
// File grammar ("#" starts a comment running to end of line):
//
//   boilerplate B1 (trigger: state, sys: system, bad: state) pattern never;
//
//   requirement R1_3 stage 1 uses B1 {
//     trigger = {System.normal system operation};
//     sys = Feedwater Tank;
//     bad = {Feedwater Tank.underflows};
//   }
//
//   requirement RX stage 2 fsm {
//     entry: <expr>[, <expr>...];
//     state rs_0 { stay: <expr>[, <expr>...]; }
//     trans rs_0 -> rs_1 when <expr>[, <expr>...];
//     release rs_1: <expr>[, <expr>...];
//   }
//
// The first declared state is the initial state. State-kind slots bind to
// expressions, system-kind slots to a concept name written verbatim.

#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "reqtest/expr.hpp"
#include "reqtest/ontology.hpp"

namespace reqtest {

enum class SlotKind { State, System };

// A semi-complete requirement sentence; `pattern` names the state-machine
// construction rule applied at instantiation ("never" or "response").
struct Boilerplate {
  std::string id;
  std::vector<std::pair<std::string, SlotKind>> slots;
  std::string pattern;
  bool operator==(const Boilerplate&) const = default;
};

struct Transition {
  std::string source;
  std::vector<BoolExpr> guards;  // conjoined where one formula is needed
  std::string target;
  bool operator==(const Transition&) const = default;
};

// Requirement state machine. Formula lists keep declaration order; where a
// single formula is needed they are conjoined in that order.
struct Requirement {
  std::string id;
  int ontology_stage = 1;
  std::vector<std::string> states;  // declaration order; front() is initial
  std::map<std::string, std::vector<BoolExpr>> stay;
  std::vector<Transition> transitions;
  std::vector<BoolExpr> entry_conditions;
  std::vector<std::pair<std::string, BoolExpr>> release_conditions;
  bool operator==(const Requirement&) const = default;
};

// A slot value: an expression for state slots, a concept name for system
// slots.
using SlotBinding = std::variant<BoolExpr, std::string>;

// Builds the requirement a boilerplate stands for. "never": one state
// rs_0, entry = trigger, stay = negated bad formula, release = bad
// formula. "response": one state rs_0, entry = trigger, stay = response
// formula, release = negated trigger. Throws on unbound or unknown slots,
// kind mismatches, atoms outside the ontology, or a system binding that
// is not a concept vertex.
Requirement instantiate_boilerplate(const Boilerplate& b,
                                    const std::map<std::string, SlotBinding>& bindings,
                                    const Ontology& o,
                                    const std::string& req_id, int stage);

// Checks the requirement invariants against the ontology; violations are
// data, never exceptions. Rules: no-states, duplicate-state, stay-state,
// transition-endpoint, release-state, duplicate-transition, empty-entry,
// empty-release, foreign-atom.
std::vector<Violation> validate_requirement(const Requirement& r,
                                            const Ontology& o);

// Parses a full RSL file. `ontologies` is ordered by stage: a requirement
// declaring stage k binds against ontologies[k-1]; a stage with no
// ontology supplied is a parse error. Every requirement is validated;
// violations raise an Error naming them.
std::vector<Requirement> parse_rsl(const std::string& text,
                                   std::span<const Ontology> ontologies);

// Same parse without requirement validation, for tooling that reports
// violations itself. Boilerplate elaboration is lenient: slot structure
// is still enforced, ontology membership is not.
std::vector<Requirement> parse_rsl_unchecked(const std::string& text,
                                             std::span<const Ontology> ontologies);

// Writes requirements in the fsm form; parse_rsl of the output yields an
// equal list.
std::string print_rsl(const std::vector<Requirement>& requirements);

}  // namespace reqtest
