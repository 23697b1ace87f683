#include "reqtest/watertank.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "json.hpp"

namespace reqtest {

void PlantParams::check() const {
  auto fail = [](const std::string& msg) { throw Error("plant params: " + msg); };
  if (!(0 <= LL && LL < L && L < H && H < HH && HH <= 100))
    fail("thresholds must satisfy 0 <= LL < L < H < HH <= 100");
  if (!(dt > 0)) fail("dt must be positive");
  if (!(q_in_max >= 0)) fail("q_in_max must be nonnegative");
  if (!(q_out_max >= 0)) fail("q_out_max must be nonnegative");
  if (!(initial_level >= 0 && initial_level <= 100))
    fail("initial_level must be within [0, 100]");
  if (horizon < 0) fail("horizon must be nonnegative");
  if (!(ripple_amp >= 0)) fail("ripple_amp must be nonnegative");
  if (!(ripple_freq >= 0)) fail("ripple_freq must be nonnegative");
  if (!(noise_amp >= 0)) fail("noise_amp must be nonnegative");
}

std::string to_string(Variant v) {
  return v == Variant::Model ? "model" : "plant";
}

namespace {

double clamp_level(double level) { return std::clamp(level, 0.0, 100.0); }

// Stateless deterministic noise so step stays a pure function: splitmix64
// over (seed, time bits), mapped to [-1, 1].
double noise_unit(unsigned seed, double time) {
  std::uint64_t x = (std::uint64_t(seed) << 32) ^ std::bit_cast<std::uint64_t>(time);
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  x = x ^ (x >> 31);
  return double(x >> 11) / double(1ULL << 53) * 2.0 - 1.0;
}

// Derived flags recomputed whenever the level changes hands: hysteresis
// valve, latched interlock, strict alarms.
void settle(PlantState& s, const PlantParams& p, double demand) {
  if (s.level <= p.L) s.inflow_valve = 1;
  else if (s.level >= p.H) s.inflow_valve = 0;
  if (s.level <= p.LL) s.deadlocked = true;
  s.outflow_demand = s.deadlocked ? 0 : demand;
  s.low_alarm = s.level < p.L;
  s.high_alarm = s.level > p.H;
}

}  // namespace

PlantState initial_state(const PlantParams& p) {
  p.check();
  PlantState s;
  s.time = 0;
  s.level = p.initial_level;
  s.inflow_valve = p.initial_level <= p.L ? 1 : 0;
  settle(s, p, 0);
  return s;
}

PlantState step(const PlantState& s, const PlantParams& p, double demand,
                Variant variant) {
  p.check();
  double effective_demand = s.deadlocked ? 0 : demand;
  double flow = (p.q_in_max * s.inflow_valve - p.q_out_max * effective_demand) * p.dt;
  double ripple = 0;
  if (variant == Variant::Plant && p.ripple_amp > 0)
    ripple = p.ripple_amp *
             std::sin(2 * std::numbers::pi * p.ripple_freq * s.time);
  double noise = p.noise_amp > 0 ? p.noise_amp * noise_unit(p.seed, s.time) : 0;

  PlantState next = s;
  next.time = s.time + p.dt;
  next.level = clamp_level(s.level + flow + ripple + noise);
  settle(next, p, demand);
  return next;
}

std::vector<ScenarioEvent> load_scenario(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw SchemaError("expected an array", "$");

  std::vector<ScenarioEvent> out;
  for (size_t i = 0; i < doc.size(); ++i) {
    std::string path = "$[" + std::to_string(i) + "]";
    const auto& entry = doc[i];
    if (!entry.is_object()) throw SchemaError("expected an object", path);

    ScenarioEvent ev;
    auto t = entry.find("t");
    if (t == entry.end()) throw SchemaError("missing field 't'", path);
    if (!t->is_number()) throw SchemaError("expected a number", path + ".t");
    ev.t = t->get<double>();
    if (ev.t < 0) throw SchemaError("event time must be nonnegative", path + ".t");

    auto set = entry.find("set");
    if (set == entry.end()) throw SchemaError("missing field 'set'", path);
    if (!set->is_object()) throw SchemaError("expected an object", path + ".set");
    for (const auto& [key, value] : set->items()) {
      std::string vpath = path + ".set." + key;
      if (key == "demand") {
        if (!value.is_number()) throw SchemaError("expected a number", vpath);
        ev.demand = value.get<double>();
        if (*ev.demand < 0 || *ev.demand > 1)
          throw SchemaError("demand must be within [0, 1]", vpath);
      } else if (key == "level") {
        if (!value.is_number()) throw SchemaError("expected a number", vpath);
        ev.level = value.get<double>();
        if (*ev.level < 0 || *ev.level > 100)
          throw SchemaError("level must be within [0, 100]", vpath);
      } else if (key == "normal_op") {
        if (!value.is_boolean()) throw SchemaError("expected a boolean", vpath);
        ev.normal_op = value.get<bool>();
      } else {
        throw SchemaError("unknown assignment '" + key + "'", vpath);
      }
    }
    out.push_back(std::move(ev));
  }
  for (size_t i = 1; i < out.size(); ++i)
    if (out[i].t < out[i - 1].t)
      throw Error("scenario events are not ordered by time");
  return out;
}

PlantParams load_params(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("expected an object", "$");

  PlantParams p;
  for (const auto& [key, value] : doc.items()) {
    std::string path = "$." + key;
    auto number = [&]() {
      if (!value.is_number()) throw SchemaError("expected a number", path);
      return value.get<double>();
    };
    if (key == "LL") p.LL = number();
    else if (key == "L") p.L = number();
    else if (key == "H") p.H = number();
    else if (key == "HH") p.HH = number();
    else if (key == "dt") p.dt = number();
    else if (key == "q_in_max") p.q_in_max = number();
    else if (key == "q_out_max") p.q_out_max = number();
    else if (key == "initial_level") p.initial_level = number();
    else if (key == "horizon") {
      if (!value.is_number_integer()) throw SchemaError("expected an integer", path);
      p.horizon = value.get<int>();
    } else if (key == "ripple_amp") p.ripple_amp = number();
    else if (key == "ripple_freq") p.ripple_freq = number();
    else if (key == "noise_amp") p.noise_amp = number();
    else if (key == "seed") {
      if (!value.is_number_unsigned()) throw SchemaError("expected a nonnegative integer", path);
      p.seed = value.get<unsigned>();
    } else {
      throw SchemaError("unknown parameter '" + key + "'", path);
    }
  }
  p.check();
  return p;
}

AtomBinding default_binding(const Ontology& o) {
  std::set<Atom> alphabet = induced_atoms(o);
  auto require = [&](const Atom& atom) {
    if (!alphabet.count(atom))
      throw Error("ontology lacks atom " + to_string(atom) +
                  " required by the simulator binding");
  };

  const Atom underflows{"Feedwater Tank", "underflows"};
  const Atom overflows{"Feedwater Tank", "overflows"};
  const Atom alarm{"FeedWater Alarm", "raised"};
  const Atom normal{"System", "normal system operation"};
  require(underflows);
  require(overflows);
  require(alarm);
  require(normal);

  AtomBinding b;
  b[underflows] = [](const PlantState& s, const PlantParams& p) {
    return s.level < p.LL;
  };
  b[overflows] = [](const PlantState& s, const PlantParams& p) {
    return s.level > p.HH;
  };
  b[alarm] = [](const PlantState& s, const PlantParams&) {
    return s.low_alarm || s.high_alarm;
  };
  b[normal] = [](const PlantState& s, const PlantParams&) {
    return s.normal_op && !s.deadlocked;
  };

  const Atom level_low{"Feedwater Tank", "level low"};
  if (alphabet.count(level_low))
    b[level_low] = [](const PlantState& s, const PlantParams& p) {
      return p.LL <= s.level && s.level < p.L;
    };
  const Atom level_high{"Feedwater Tank", "level high"};
  if (alphabet.count(level_high))
    b[level_high] = [](const PlantState& s, const PlantParams& p) {
      return p.H < s.level && s.level <= p.HH;
    };
  return b;
}

Trace run_scenario(const PlantParams& p, const std::vector<ScenarioEvent>& script,
                   const AtomBinding& binding, Variant variant) {
  p.check();
  for (size_t i = 1; i < script.size(); ++i)
    if (script[i].t < script[i - 1].t)
      throw Error("scenario events are not ordered by time");

  Trace trace;
  for (const auto& [atom, predicate] : binding) {
    (void)predicate;
    trace.atom_columns.push_back(atom);
  }
  trace.analog_columns = {"level", "inflowValve", "outflowDemand"};

  PlantState state = initial_state(p);
  double scripted_demand = 0;
  size_t next_event = 0;

  auto apply_events = [&](double now) {
    while (next_event < script.size() && script[next_event].t <= now + 1e-9) {
      const ScenarioEvent& ev = script[next_event];
      if (ev.demand) scripted_demand = *ev.demand;
      if (ev.level) state.level = clamp_level(*ev.level);
      if (ev.normal_op) state.normal_op = *ev.normal_op;
      settle(state, p, scripted_demand);
      ++next_event;
    }
  };

  auto emit = [&] {
    Sample s;
    s.time = state.time;
    for (const auto& [atom, predicate] : binding) {
      (void)atom;
      s.atom_values.push_back(predicate(state, p) ? 1 : 0);
    }
    s.analog_values = {state.level, state.inflow_valve, state.outflow_demand};
    trace.samples.push_back(std::move(s));
  };

  apply_events(0);
  emit();
  for (int k = 1; k <= p.horizon; ++k) {
    state = step(state, p, scripted_demand, variant);
    state.time = k * p.dt;  // exact grid, no accumulated rounding
    apply_events(state.time);
    emit();
  }
  return trace;
}

}  // namespace reqtest
