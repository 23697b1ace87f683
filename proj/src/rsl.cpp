#include "reqtest/rsl.hpp"

#include <algorithm>
#include <sstream>

#include "expr_parser.hpp"

namespace reqtest {

namespace {

// Elaboration shared by the strict public entry point and the lenient
// parser path; `check_ontology` gates atom and concept membership only,
// slot structure is always enforced.
Requirement instantiate_impl(const Boilerplate& b,
                             const std::map<std::string, SlotBinding>& bindings,
                             const Ontology& o, const std::string& req_id,
                             int stage, bool check_ontology) {
  for (const auto& [name, value] : bindings) {
    bool known = std::any_of(b.slots.begin(), b.slots.end(),
                             [&](const auto& s) { return s.first == name; });
    if (!known)
      throw Error("unknown slot '" + name + "' for boilerplate '" + b.id + "'");
  }

  std::vector<BoolExpr> state_values;
  for (const auto& [name, kind] : b.slots) {
    auto it = bindings.find(name);
    if (it == bindings.end())
      throw Error("slot '" + name + "' of boilerplate '" + b.id + "' is unbound");
    if (kind == SlotKind::State) {
      const auto* expr = std::get_if<BoolExpr>(&it->second);
      if (!expr)
        throw Error("slot '" + name + "' expects an expression, got a concept name");
      state_values.push_back(*expr);
    } else {
      const auto* concept_id = std::get_if<std::string>(&it->second);
      if (!concept_id)
        throw Error("slot '" + name + "' expects a concept name, got an expression");
      if (check_ontology) {
        auto v = o.vertices.find(*concept_id);
        if (v == o.vertices.end() ||
            !v->second.labels.count(std::string(kVertexLabelConcept)))
          throw Error("'" + *concept_id + "' is not a concept vertex of the ontology");
      }
    }
  }

  if (check_ontology) {
    std::set<Atom> alphabet = induced_atoms(o);
    for (const auto& expr : state_values) {
      for (const auto& atom : atoms_of(expr)) {
        if (!alphabet.count(atom))
          throw Error("atom " + to_string(atom) + " is not in the ontology");
      }
    }
  }

  if (state_values.size() != 2)
    throw Error("pattern '" + b.pattern + "' requires exactly two state slots, boilerplate '" +
                b.id + "' has " + std::to_string(state_values.size()));
  const BoolExpr& trigger = state_values[0];

  Requirement r;
  r.id = req_id;
  r.ontology_stage = stage;
  r.states = {"rs_0"};
  r.entry_conditions = {trigger};
  if (b.pattern == "never") {
    const BoolExpr& bad = state_values[1];
    r.stay["rs_0"] = {BoolExpr::negation(bad)};
    r.release_conditions = {{"rs_0", bad}};
  } else if (b.pattern == "response") {
    const BoolExpr& response = state_values[1];
    r.stay["rs_0"] = {response};
    r.release_conditions = {{"rs_0", BoolExpr::negation(trigger)}};
  } else {
    throw Error("unknown pattern '" + b.pattern + "' in boilerplate '" + b.id + "'");
  }
  return r;
}

}  // namespace

Requirement instantiate_boilerplate(const Boilerplate& b,
                                    const std::map<std::string, SlotBinding>& bindings,
                                    const Ontology& o,
                                    const std::string& req_id, int stage) {
  return instantiate_impl(b, bindings, o, req_id, stage, true);
}

std::vector<Violation> validate_requirement(const Requirement& r,
                                            const Ontology& o) {
  std::vector<Violation> out;
  const std::string in_req = " in requirement '" + r.id + "'";

  if (r.states.empty())
    out.push_back({"no-states", r.id,
                   "requirement '" + r.id + "' declares no states"});
  std::set<std::string> q;
  for (const auto& s : r.states) {
    if (!q.insert(s).second)
      out.push_back({"duplicate-state", s,
                     "state '" + s + "' declared more than once" + in_req});
  }

  for (const auto& [s, exprs] : r.stay) {
    (void)exprs;
    if (!q.count(s))
      out.push_back({"stay-state", s,
                     "stay condition for undeclared state '" + s + "'" + in_req});
  }

  std::set<std::string> transition_keys;
  for (const auto& t : r.transitions) {
    if (!q.count(t.source))
      out.push_back({"transition-endpoint", t.source,
                     "transition from undeclared state '" + t.source + "'" + in_req});
    if (!q.count(t.target))
      out.push_back({"transition-endpoint", t.target,
                     "transition to undeclared state '" + t.target + "'" + in_req});
    std::set<std::string> guard_set;
    for (const auto& g : t.guards) guard_set.insert(canonical(g));
    std::string key = t.source + "\x1f";
    for (const auto& g : guard_set) key += g + "\x1f";
    if (!transition_keys.insert(key).second)
      out.push_back({"duplicate-transition", t.source,
                     "two transitions from '" + t.source +
                         "' share one guard set" + in_req});
  }

  for (const auto& [s, expr] : r.release_conditions) {
    (void)expr;
    if (!q.count(s))
      out.push_back({"release-state", s,
                     "release condition on undeclared state '" + s + "'" + in_req});
  }

  if (r.entry_conditions.empty())
    out.push_back({"empty-entry", r.id,
                   "requirement '" + r.id + "' has no entry conditions"});
  if (r.release_conditions.empty())
    out.push_back({"empty-release", r.id,
                   "requirement '" + r.id + "' has no release conditions"});

  // Alphabet by direct arc scan so a broken ontology still yields
  // violations here rather than an exception.
  std::set<Atom> alphabet;
  for (const auto& [id, a] : o.arcs) {
    (void)id;
    if (a.labels.count(std::string(kArcLabelHasState)))
      alphabet.insert(Atom{a.source, a.target});
  }
  std::set<Atom> reported;
  auto check_formula = [&](const BoolExpr& e) {
    for (const auto& atom : atoms_of(e)) {
      if (!alphabet.count(atom) && reported.insert(atom).second)
        out.push_back({"foreign-atom", to_string(atom),
                       "atom " + to_string(atom) +
                           " is not induced by the governing ontology" + in_req});
    }
  };
  for (const auto& e : r.entry_conditions) check_formula(e);
  for (const auto& [s, exprs] : r.stay) {
    (void)s;
    for (const auto& e : exprs) check_formula(e);
  }
  for (const auto& t : r.transitions)
    for (const auto& e : t.guards) check_formula(e);
  for (const auto& [s, e] : r.release_conditions) {
    (void)s;
    check_formula(e);
  }

  return out;
}

namespace {

using detail::ExprCursor;
using detail::skip_ws_and_comments;

bool ident_start(char ch) {
  return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || ch == '_';
}

bool ident_char(char ch) {
  return ident_start(ch) || (ch >= '0' && ch <= '9');
}

struct RslParser {
  ExprCursor c;
  std::span<const Ontology> ontologies;
  bool checked;

  std::map<std::string, Boilerplate> boilerplates;
  std::vector<Requirement> requirements;

  std::string ident(const char* what) {
    skip_ws_and_comments(c);
    if (c.at_end() || !ident_start(c.peek())) c.fail(std::string("expected ") + what);
    size_t begin = c.pos;
    while (!c.at_end() && ident_char(c.peek())) c.advance();
    return std::string(c.text.substr(begin, c.pos - begin));
  }

  int integer(const char* what) {
    skip_ws_and_comments(c);
    if (c.at_end() || c.peek() < '0' || c.peek() > '9')
      c.fail(std::string("expected ") + what);
    long value = 0;
    while (!c.at_end() && c.peek() >= '0' && c.peek() <= '9') {
      value = value * 10 + (c.peek() - '0');
      if (value > 1000000) c.fail(std::string("unreasonable ") + what);
      c.advance();
    }
    return static_cast<int>(value);
  }

  void expect(char ch) {
    skip_ws_and_comments(c);
    if (c.at_end() || c.peek() != ch)
      c.fail(std::string("expected '") + ch + "'");
    c.advance();
  }

  bool try_consume(char ch) {
    skip_ws_and_comments(c);
    if (c.at_end() || c.peek() != ch) return false;
    c.advance();
    return true;
  }

  std::vector<BoolExpr> expr_list() {
    std::vector<BoolExpr> out;
    out.push_back(detail::parse_expr_prefix(c));
    while (try_consume(',')) out.push_back(detail::parse_expr_prefix(c));
    return out;
  }

  void run() {
    for (;;) {
      skip_ws_and_comments(c);
      if (c.at_end()) return;
      std::string kw = ident("'boilerplate' or 'requirement'");
      if (kw == "boilerplate") {
        parse_boilerplate();
      } else if (kw == "requirement") {
        parse_requirement();
      } else {
        c.fail("expected 'boilerplate' or 'requirement', got '" + kw + "'");
      }
    }
  }

  void parse_boilerplate() {
    Boilerplate b;
    b.id = ident("boilerplate id");
    expect('(');
    if (!try_consume(')')) {
      for (;;) {
        std::string name = ident("slot name");
        expect(':');
        std::string kind = ident("slot kind");
        SlotKind k;
        if (kind == "state") {
          k = SlotKind::State;
        } else if (kind == "system") {
          k = SlotKind::System;
        } else {
          c.fail("slot kind must be 'state' or 'system', got '" + kind + "'");
        }
        for (const auto& [existing, unused] : b.slots) {
          (void)unused;
          if (existing == name) c.fail("duplicate slot name '" + name + "'");
        }
        b.slots.emplace_back(name, k);
        if (!try_consume(',')) break;
      }
      expect(')');
    }
    skip_ws_and_comments(c);
    std::string kw = ident("'pattern'");
    if (kw != "pattern") c.fail("expected 'pattern', got '" + kw + "'");
    b.pattern = ident("pattern name");
    expect(';');
    if (!boilerplates.emplace(b.id, b).second)
      c.fail("duplicate boilerplate id '" + b.id + "'");
  }

  void parse_requirement() {
    int req_line = c.line, req_column = c.column;
    std::string id = ident("requirement id");
    for (const auto& r : requirements)
      if (r.id == id) c.fail("duplicate requirement id '" + id + "'");

    std::string kw = ident("'stage'");
    if (kw != "stage") c.fail("expected 'stage', got '" + kw + "'");
    int stage = integer("stage number");
    if (stage < 1) c.fail("stage must be positive");
    if (static_cast<size_t>(stage) > ontologies.size())
      c.fail("requirement '" + id + "' declares stage " + std::to_string(stage) +
             " but only " + std::to_string(ontologies.size()) +
             " ontologies were supplied");
    const Ontology& o = ontologies[static_cast<size_t>(stage) - 1];

    kw = ident("'uses' or 'fsm'");
    if (kw == "uses") {
      std::string bid = ident("boilerplate id");
      auto b = boilerplates.find(bid);
      if (b == boilerplates.end()) c.fail("unknown boilerplate '" + bid + "'");
      auto bindings = parse_bindings(b->second);
      try {
        requirements.push_back(
            instantiate_impl(b->second, bindings, o, id, stage, checked));
      } catch (const Error& e) {
        throw ParseError(e.what(), req_line, req_column);
      }
    } else if (kw == "fsm") {
      requirements.push_back(parse_fsm(id, stage));
    } else {
      c.fail("expected 'uses' or 'fsm', got '" + kw + "'");
    }
  }

  std::map<std::string, SlotBinding> parse_bindings(const Boilerplate& b) {
    expect('{');
    std::map<std::string, SlotBinding> bindings;
    while (!try_consume('}')) {
      std::string name = ident("slot name");
      auto slot = std::find_if(b.slots.begin(), b.slots.end(),
                               [&](const auto& s) { return s.first == name; });
      if (slot == b.slots.end())
        c.fail("unknown slot '" + name + "' for boilerplate '" + b.id + "'");
      expect('=');
      SlotBinding value = slot->second == SlotKind::State
                              ? SlotBinding(parse_state_value())
                              : SlotBinding(parse_system_value());
      if (slot->second == SlotKind::State) expect(';');
      if (!bindings.emplace(name, std::move(value)).second)
        c.fail("slot '" + name + "' bound twice");
    }
    return bindings;
  }

  BoolExpr parse_state_value() { return detail::parse_expr_prefix(c); }

  // Everything up to the terminating ';' verbatim, trimmed.
  std::string parse_system_value() {
    skip_ws_and_comments(c);
    size_t begin = c.pos;
    while (!c.at_end() && c.peek() != ';') c.advance();
    if (c.at_end()) c.fail("unterminated binding, expected ';'");
    std::string_view raw = c.text.substr(begin, c.pos - begin);
    c.advance();  // ";"
    size_t end = raw.size();
    while (end > 0 && (raw[end - 1] == ' ' || raw[end - 1] == '\t' ||
                       raw[end - 1] == '\r' || raw[end - 1] == '\n'))
      --end;
    return std::string(raw.substr(0, end));
  }

  Requirement parse_fsm(const std::string& id, int stage) {
    Requirement r;
    r.id = id;
    r.ontology_stage = stage;
    expect('{');
    while (!try_consume('}')) {
      std::string kw = ident("'entry', 'state', 'trans', or 'release'");
      if (kw == "entry") {
        expect(':');
        for (auto& e : expr_list()) r.entry_conditions.push_back(std::move(e));
        expect(';');
      } else if (kw == "state") {
        std::string q = ident("state id");
        r.states.push_back(q);
        expect('{');
        while (!try_consume('}')) {
          std::string inner = ident("'stay'");
          if (inner != "stay") c.fail("expected 'stay', got '" + inner + "'");
          expect(':');
          for (auto& e : expr_list()) r.stay[q].push_back(std::move(e));
          expect(';');
        }
      } else if (kw == "trans") {
        Transition t;
        t.source = ident("state id");
        expect('-');
        expect('>');
        t.target = ident("state id");
        std::string when = ident("'when'");
        if (when != "when") c.fail("expected 'when', got '" + when + "'");
        t.guards = expr_list();
        expect(';');
        r.transitions.push_back(std::move(t));
      } else if (kw == "release") {
        std::string q = ident("state id");
        expect(':');
        for (auto& e : expr_list())
          r.release_conditions.emplace_back(q, std::move(e));
        expect(';');
      } else {
        c.fail("expected 'entry', 'state', 'trans', or 'release', got '" + kw + "'");
      }
    }
    return r;
  }
};

std::vector<Requirement> parse_impl(const std::string& text,
                                    std::span<const Ontology> ontologies,
                                    bool checked) {
  RslParser p{ExprCursor{text}, ontologies, checked, {}, {}};
  p.run();
  if (checked) {
    for (const auto& r : p.requirements) {
      const Ontology& o = ontologies[static_cast<size_t>(r.ontology_stage) - 1];
      auto violations = validate_requirement(r, o);
      if (!violations.empty()) {
        std::string msg = "requirement '" + r.id + "' failed validation:";
        for (const auto& v : violations) msg += "\n  " + to_string(v);
        throw Error(msg);
      }
    }
  }
  return p.requirements;
}

std::string join_canonical(const std::vector<BoolExpr>& exprs) {
  std::string out;
  for (size_t i = 0; i < exprs.size(); ++i) {
    if (i) out += ", ";
    out += canonical(exprs[i]);
  }
  return out;
}

}  // namespace

std::vector<Requirement> parse_rsl(const std::string& text,
                                   std::span<const Ontology> ontologies) {
  return parse_impl(text, ontologies, true);
}

std::vector<Requirement> parse_rsl_unchecked(const std::string& text,
                                             std::span<const Ontology> ontologies) {
  return parse_impl(text, ontologies, false);
}

std::string print_rsl(const std::vector<Requirement>& requirements) {
  std::string out;
  for (size_t i = 0; i < requirements.size(); ++i) {
    const Requirement& r = requirements[i];
    if (i) out += "\n";
    out += "requirement " + r.id + " stage " +
           std::to_string(r.ontology_stage) + " fsm {\n";
    if (!r.entry_conditions.empty())
      out += "  entry: " + join_canonical(r.entry_conditions) + ";\n";
    for (const auto& q : r.states) {
      auto stay = r.stay.find(q);
      if (stay != r.stay.end() && !stay->second.empty()) {
        out += "  state " + q + " {\n";
        out += "    stay: " + join_canonical(stay->second) + ";\n";
        out += "  }\n";
      } else {
        out += "  state " + q + " { }\n";
      }
    }
    for (const auto& t : r.transitions)
      out += "  trans " + t.source + " -> " + t.target + " when " +
             join_canonical(t.guards) + ";\n";
    for (const auto& [q, e] : r.release_conditions)
      out += "  release " + q + ": " + canonical(e) + ";\n";
    out += "}\n";
  }
  return out;
}

}  // namespace reqtest
