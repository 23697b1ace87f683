// Discrete-time feedwater-tank loop: a hysteresis fill controller, a
// low-level safety interlock that deadlocks outflow, level alarms, and a
// scripted scenario runner that emits traces bound to ontology atoms.
// The "plant" variant adds a deterministic sinusoidal ripple per step on
// top of the ideal "model" dynamics.

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reqtest/executor.hpp"
#include "reqtest/ontology.hpp"

namespace reqtest {

// Levels are percent of tank span, rates percent per second.
struct PlantParams {
  double LL = 10;
  double L = 20;
  double H = 80;
  double HH = 90;
  double dt = 0.1;
  double q_in_max = 5;
  double q_out_max = 4;
  double initial_level = 50;
  int horizon = 2000;
  double ripple_amp = 2;
  double ripple_freq = 1;  // Hz
  double noise_amp = 0;
  unsigned seed = 0;

  // Throws Error unless 0 <= LL < L < H < HH <= 100, dt > 0, rates,
  // amplitudes, and horizon nonnegative, initial level within the tank.
  void check() const;
  bool operator==(const PlantParams&) const = default;
};

struct PlantState {
  double time = 0;
  double level = 0;
  double inflow_valve = 0;    // fraction [0, 1]
  double outflow_demand = 0;  // fraction [0, 1], as limited by the interlock
  bool low_alarm = false;
  bool high_alarm = false;
  bool deadlocked = false;    // latches; never resets within a run
  bool normal_op = true;      // scenario flag, not derived from the level
  bool operator==(const PlantState&) const = default;
};

enum class Variant { Model, Plant };

std::string to_string(Variant v);

PlantState initial_state(const PlantParams& p);

// One forward-Euler step. `demand` is the scripted outflow demand; the
// interlock overrides it with 0 once deadlocked. The valve switches only
// at the thresholds: open at level <= L, closed at level >= H.
PlantState step(const PlantState& s, const PlantParams& p, double demand,
                Variant variant);

// Scripted adjustments applied at the first sample instant at or after t.
struct ScenarioEvent {
  double t = 0;
  std::optional<double> demand;
  std::optional<double> level;
  std::optional<bool> normal_op;
  bool operator==(const ScenarioEvent&) const = default;
};

// JSON array of {"t": seconds, "set": {"demand", "level", "normal_op"}}.
std::vector<ScenarioEvent> load_scenario(const std::string& json_text);

// JSON object overriding any subset of the PlantParams fields by name.
PlantParams load_params(const std::string& json_text);

using AtomPredicate = std::function<bool(const PlantState&, const PlantParams&)>;
using AtomBinding = std::map<Atom, AtomPredicate>;

// Binds the tank atoms: underflows = level < LL, overflows = level > HH,
// alarm raised = either alarm, normal system operation = scenario flag
// and not deadlocked. Stage atoms "level low" (LL <= level < L) and
// "level high" (H < level <= HH) are bound when the ontology has them.
// Throws when a required atom is missing from the ontology.
AtomBinding default_binding(const Ontology& o);

// Runs horizon steps from the initial state, applying script events and
// evaluating the binding at every sample (horizon + 1 samples including
// t = 0). Analog columns: level, inflowValve, outflowDemand. The script
// must be ordered by time.
Trace run_scenario(const PlantParams& p, const std::vector<ScenarioEvent>& script,
                   const AtomBinding& binding, Variant variant);

}  // namespace reqtest
