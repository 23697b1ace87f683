#include "reqtest/ontology.hpp"

#include <algorithm>

#include "json.hpp"

namespace reqtest {

std::string to_string(const Violation& v) {
  return v.rule + " (" + v.subject + "): " + v.message;
}

std::vector<Violation> validate(const Ontology& o) {
  std::vector<Violation> out;

  if (o.stage_version < 1)
    out.push_back({"stage-version", std::to_string(o.stage_version),
                   "stage version must be a positive integer"});

  for (const auto& label : o.vertex_labels) {
    if (o.arc_labels.count(label))
      out.push_back({"label-alphabets-overlap", label,
                     "label '" + label + "' is in both the vertex and arc alphabets"});
  }

  for (const auto& [id, v] : o.vertices) {
    for (const auto& label : v.labels) {
      if (!o.vertex_labels.count(label))
        out.push_back({"unknown-vertex-label", id,
                       "vertex '" + id + "' carries label '" + label +
                           "' outside the vertex alphabet"});
    }
  }

  for (const auto& [id, a] : o.arcs) {
    if (!o.vertices.count(a.source))
      out.push_back({"arc-source-missing", id,
                     "arc '" + id + "' has source '" + a.source +
                         "' which is not a vertex"});
    if (!o.vertices.count(a.target))
      out.push_back({"arc-target-missing", id,
                     "arc '" + id + "' has target '" + a.target +
                         "' which is not a vertex"});
    for (const auto& label : a.labels) {
      if (!o.arc_labels.count(label))
        out.push_back({"unknown-arc-label", id,
                       "arc '" + id + "' carries label '" + label +
                           "' outside the arc alphabet"});
    }
    if (a.labels.count(std::string(kArcLabelHasState))) {
      auto src = o.vertices.find(a.source);
      auto tgt = o.vertices.find(a.target);
      bool src_ok = src != o.vertices.end() &&
                    src->second.labels.count(std::string(kVertexLabelConcept));
      bool tgt_ok = tgt != o.vertices.end() &&
                    tgt->second.labels.count(std::string(kVertexLabelState));
      if (!src_ok || !tgt_ok)
        out.push_back({"has-state-endpoints", id,
                       "has-state arc '" + id +
                           "' must run from a concept vertex to a state vertex"});
    }
  }

  return out;
}

std::set<Atom> induced_atoms(const Ontology& o) {
  if (!validate(o).empty())
    throw Error("induced_atoms requires a valid ontology");
  std::set<Atom> out;
  for (const auto& [id, a] : o.arcs) {
    if (a.labels.count(std::string(kArcLabelHasState)))
      out.insert(Atom{a.source, a.target});
  }
  return out;
}

Ontology with_stage_prefix(const Ontology& o, int stage) {
  const std::string prefix = "stage" + std::to_string(stage) + ":";
  Ontology out;
  out.vertex_labels = o.vertex_labels;
  out.arc_labels = o.arc_labels;
  out.stage_version = o.stage_version;
  for (const auto& [id, v] : o.vertices) out.vertices[prefix + id] = v;
  for (const auto& [id, a] : o.arcs)
    out.arcs[prefix + id] = ArcRecord{prefix + a.source, prefix + a.target, a.labels};
  return out;
}

Ontology refine(const Ontology& base, const Ontology& extension,
                const std::vector<RefinementLink>& links) {
  if (!validate(base).empty()) throw Error("refine: base ontology is invalid");
  if (!validate(extension).empty())
    throw Error("refine: extension ontology is invalid");

  Ontology out = base;
  out.stage_version = base.stage_version + 1;
  out.vertex_labels.insert(extension.vertex_labels.begin(),
                           extension.vertex_labels.end());
  out.arc_labels.insert(extension.arc_labels.begin(), extension.arc_labels.end());
  out.arc_labels.insert(std::string(kArcLabelRefines));

  for (const auto& [id, v] : extension.vertices) {
    if (!out.vertices.emplace(id, v).second)
      throw Error("refine: vertex id collision '" + id + "'");
  }
  for (const auto& [id, a] : extension.arcs) {
    if (!out.arcs.emplace(id, a).second)
      throw Error("refine: arc id collision '" + id + "'");
  }

  for (const auto& link : links) {
    if (!extension.vertices.count(link.refined_vertex_id))
      throw Error("refine: link endpoint '" + link.refined_vertex_id +
                  "' is not a vertex of the extension");
    if (!base.vertices.count(link.base_vertex_id))
      throw Error("refine: link endpoint '" + link.base_vertex_id +
                  "' is not a vertex of the base");
    std::string id =
        "refines:" + link.refined_vertex_id + "->" + link.base_vertex_id;
    if (!out.arcs
             .emplace(id, ArcRecord{link.refined_vertex_id, link.base_vertex_id,
                                    {std::string(kArcLabelRefines)}})
             .second)
      throw Error("refine: arc id collision '" + id + "'");
  }

  if (!validate(out).empty())
    throw Error("refine: merged ontology failed validation");
  return out;
}

std::vector<std::string> check_traceability(const std::set<Atom>& req_atoms,
                                            const Ontology& refined,
                                            const std::string& id_prefix) {
  if (!validate(refined).empty())
    throw Error("check_traceability requires a valid ontology");

  std::set<std::string> concepts;
  for (const auto& atom : req_atoms) concepts.insert(atom.concept_name);

  std::vector<std::string> untraced;
  for (const auto& name : concepts) {
    const std::string id = id_prefix + name;
    if (!refined.vertices.count(id))
      throw Error("check_traceability: no vertex for concept '" + name + "'");
    if (refined.stage_version == 1) continue;
    bool traced = false;
    for (const auto& [arc_id, a] : refined.arcs) {
      if (a.labels.count(std::string(kArcLabelRefines)) &&
          (a.source == id || a.target == id)) {
        traced = true;
        break;
      }
    }
    if (!traced) untraced.push_back(name);
  }
  return untraced;
}

namespace {

using nlohmann::json;

const json& require_field(const json& obj, const char* key,
                          const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError("missing field '" + std::string(key) + "'", path);
  return *it;
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError("expected a string", path);
  return j.get<std::string>();
}

std::set<std::string> as_string_set(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError("expected an array", path);
  std::set<std::string> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.insert(as_string(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

Ontology load_ontology(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("expected an object", "$");

  Ontology o;
  o.vertex_labels = as_string_set(require_field(doc, "vertex_labels", "$"),
                                  "$.vertex_labels");
  o.arc_labels =
      as_string_set(require_field(doc, "arc_labels", "$"), "$.arc_labels");

  const json& stage = require_field(doc, "stage_version", "$");
  if (!stage.is_number_integer())
    throw SchemaError("expected an integer", "$.stage_version");
  o.stage_version = stage.get<int>();

  const json& vertices = require_field(doc, "vertices", "$");
  if (!vertices.is_array()) throw SchemaError("expected an array", "$.vertices");
  for (size_t i = 0; i < vertices.size(); ++i) {
    std::string path = "$.vertices[" + std::to_string(i) + "]";
    const json& v = vertices[i];
    if (!v.is_object()) throw SchemaError("expected an object", path);
    std::string id = as_string(require_field(v, "id", path), path + ".id");
    VertexRecord rec{
        as_string_set(require_field(v, "labels", path), path + ".labels")};
    if (!o.vertices.emplace(id, std::move(rec)).second)
      throw SchemaError("duplicate vertex id '" + id + "'", path);
  }

  const json& arcs = require_field(doc, "arcs", "$");
  if (!arcs.is_array()) throw SchemaError("expected an array", "$.arcs");
  for (size_t i = 0; i < arcs.size(); ++i) {
    std::string path = "$.arcs[" + std::to_string(i) + "]";
    const json& a = arcs[i];
    if (!a.is_object()) throw SchemaError("expected an object", path);
    std::string id = as_string(require_field(a, "id", path), path + ".id");
    ArcRecord rec{
        as_string(require_field(a, "source", path), path + ".source"),
        as_string(require_field(a, "target", path), path + ".target"),
        as_string_set(require_field(a, "labels", path), path + ".labels")};
    if (!o.arcs.emplace(id, std::move(rec)).second)
      throw SchemaError("duplicate arc id '" + id + "'", path);
  }

  return o;
}

std::string save_ontology(const Ontology& o) {
  json doc = json::object();
  doc["vertex_labels"] = json::array();
  for (const auto& l : o.vertex_labels) doc["vertex_labels"].push_back(l);
  doc["arc_labels"] = json::array();
  for (const auto& l : o.arc_labels) doc["arc_labels"].push_back(l);
  doc["stage_version"] = o.stage_version;

  doc["vertices"] = json::array();
  for (const auto& [id, v] : o.vertices) {
    json rec = json::object();
    rec["id"] = id;
    rec["labels"] = json::array();
    for (const auto& l : v.labels) rec["labels"].push_back(l);
    doc["vertices"].push_back(std::move(rec));
  }

  doc["arcs"] = json::array();
  for (const auto& [id, a] : o.arcs) {
    json rec = json::object();
    rec["id"] = id;
    rec["source"] = a.source;
    rec["target"] = a.target;
    rec["labels"] = json::array();
    for (const auto& l : a.labels) rec["labels"].push_back(l);
    doc["arcs"].push_back(std::move(rec));
  }

  return doc.dump(2) + "\n";
}

}  // namespace reqtest
