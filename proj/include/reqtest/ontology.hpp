// Labeled multigraph of system concepts and their states, refined stage by
// stage. Vertices and arcs carry label sets drawn from two disjoint
// alphabets; `has-state` arcs from concept vertices to state vertices
// induce the atom alphabet the expression module works over.

#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "reqtest/expr.hpp"

namespace reqtest {

inline constexpr std::string_view kVertexLabelConcept = "concept";
inline constexpr std::string_view kVertexLabelState = "state";
inline constexpr std::string_view kArcLabelContains = "contains";
inline constexpr std::string_view kArcLabelHasState = "has-state";
inline constexpr std::string_view kArcLabelRefines = "refines";

struct VertexRecord {
  std::set<std::string> labels;
  bool operator==(const VertexRecord&) const = default;
};

struct ArcRecord {
  std::string source;
  std::string target;
  std::set<std::string> labels;
  bool operator==(const ArcRecord&) const = default;
};

// Maps keyed by id keep ids unique by construction and give every
// serialization a stable order.
struct Ontology {
  std::set<std::string> vertex_labels;
  std::set<std::string> arc_labels;
  int stage_version = 1;
  std::map<std::string, VertexRecord> vertices;
  std::map<std::string, ArcRecord> arcs;
  bool operator==(const Ontology&) const = default;
};

// Links one vertex of a newer ontology to the vertex it refines in the
// previous stage; becomes a `refines` arc in the merged graph.
struct RefinementLink {
  std::string refined_vertex_id;
  std::string base_vertex_id;
  bool operator==(const RefinementLink&) const = default;
};

// One broken rule. `rule` is a stable slug, `subject` the offending id or
// label, `message` a human-readable sentence naming both.
struct Violation {
  std::string rule;
  std::string subject;
  std::string message;
  bool operator==(const Violation&) const = default;
};

std::string to_string(const Violation& v);

// Checks every structural rule; returns all breaches, empty when the
// ontology is well formed. Never throws.
std::vector<Violation> validate(const Ontology& o);

// One Atom per `has-state` arc: (source vertex id, target vertex id).
// Requires validate(o) empty.
std::set<Atom> induced_atoms(const Ontology& o);

// Copy of o with every vertex and arc id (and arc endpoint reference)
// prefixed "stage<n>:"; label alphabets and stage version are unchanged.
Ontology with_stage_prefix(const Ontology& o, int stage);

// Merges a valid extension into a valid base: unions alphabets (adding
// `refines`), unions vertices and arcs (ids must not collide), adds one
// `refines` arc per link, bumps stage_version. Throws on collision or a
// link endpoint absent from its side.
Ontology refine(const Ontology& base, const Ontology& extension,
                const std::vector<RefinementLink>& links);

// Concept names from req_atoms whose vertices carry no `refines` arc in a
// merged graph at stage_version > 1; empty at stage 1. `id_prefix` maps
// unprefixed concept names onto namespaced vertex ids. Throws when an
// atom names a concept with no vertex at all.
std::vector<std::string> check_traceability(const std::set<Atom>& req_atoms,
                                            const Ontology& refined,
                                            const std::string& id_prefix = "");

// JSON document form (see save_ontology for the layout). Throws
// SchemaError with a path on malformed documents, Error on invalid JSON.
Ontology load_ontology(const std::string& json_text);

// Byte-stable rendering: objects with fields vertex_labels, arc_labels,
// stage_version, vertices ({id, labels}), arcs ({id, source, target,
// labels}), all arrays ordered by id, two-space indent, trailing newline.
std::string save_ontology(const Ontology& o);

}  // namespace reqtest
