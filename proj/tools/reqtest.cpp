// Command-line pipeline: validate requirement projects, refine staged
// ontologies, generate test cases, simulate scenarios, execute test
// suites over traces, and render reports.
//
// Exit codes: 0 success, 1 semantic failure (violations or Fail
// verdicts), 2 operational failure (missing files, parse errors).

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "reqtest/executor.hpp"
#include "reqtest/ontology.hpp"
#include "reqtest/rsl.hpp"
#include "reqtest/testgen.hpp"
#include "reqtest/watertank.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace reqtest;

namespace {

constexpr const char* kVersionLine = "reqtest 0.1.0";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file '" + path.string() + "'");
  out << content;
  if (!out) throw Error("cannot write file '" + path.string() + "'");
}

std::vector<Ontology> load_ontologies(const std::vector<std::string>& paths) {
  std::vector<Ontology> out;
  for (const auto& path : paths) {
    try {
      out.push_back(load_ontology(read_file(path)));
    } catch (const SchemaError& e) {
      throw Error("'" + path + "': " + e.what());
    }
  }
  return out;
}

std::vector<RefinementLink> load_links(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw SchemaError("expected an array", "$");
  std::vector<RefinementLink> out;
  for (size_t i = 0; i < doc.size(); ++i) {
    std::string path = "$[" + std::to_string(i) + "]";
    const auto& entry = doc[i];
    if (!entry.is_object() || !entry.contains("refined") || !entry.contains("base") ||
        !entry["refined"].is_string() || !entry["base"].is_string())
      throw SchemaError("expected {\"refined\": id, \"base\": id}", path);
    out.push_back({entry["refined"].get<std::string>(),
                   entry["base"].get<std::string>()});
  }
  return out;
}

std::set<Atom> requirement_atoms(const Requirement& r) {
  std::set<Atom> out;
  auto add = [&](const BoolExpr& e) {
    auto atoms = atoms_of(e);
    out.insert(atoms.begin(), atoms.end());
  };
  for (const auto& e : r.entry_conditions) add(e);
  for (const auto& [q, exprs] : r.stay) {
    (void)q;
    for (const auto& e : exprs) add(e);
  }
  for (const auto& t : r.transitions)
    for (const auto& e : t.guards) add(e);
  for (const auto& [q, e] : r.release_conditions) {
    (void)q;
    add(e);
  }
  return out;
}

struct ValidateArgs {
  std::vector<std::string> ontology_paths;
  std::string rsl_path;
};

int cmd_validate(const ValidateArgs& args) {
  auto ontologies = load_ontologies(args.ontology_paths);
  int violations = 0;
  for (size_t i = 0; i < ontologies.size(); ++i) {
    for (const auto& v : validate(ontologies[i])) {
      std::cout << args.ontology_paths[i] << ": " << to_string(v) << "\n";
      ++violations;
    }
  }
  auto requirements = parse_rsl_unchecked(read_file(args.rsl_path), ontologies);
  for (const auto& r : requirements) {
    const Ontology& o = ontologies[static_cast<size_t>(r.ontology_stage) - 1];
    for (const auto& v : validate_requirement(r, o)) {
      std::cout << args.rsl_path << ": " << to_string(v) << "\n";
      ++violations;
    }
  }
  if (violations) {
    std::cout << violations << " violation(s)\n";
    return 1;
  }
  std::cout << "ok\n";
  return 0;
}

struct RefineArgs {
  std::vector<std::string> ontology_paths;  // base, extension
  std::string links_path;
  std::string out_path;
  std::string rsl_path;  // optional, enables traceability warnings
};

int cmd_refine(const RefineArgs& args) {
  auto raw = load_ontologies(args.ontology_paths);
  const Ontology& base_raw = raw[0];
  const Ontology& ext_raw = raw[1];
  int base_stage = base_raw.stage_version;
  int ext_stage = base_stage + 1;

  Ontology base = with_stage_prefix(base_raw, base_stage);
  Ontology ext = with_stage_prefix(ext_raw, ext_stage);

  std::vector<RefinementLink> links;
  for (const auto& link : load_links(read_file(args.links_path)))
    links.push_back({"stage" + std::to_string(ext_stage) + ":" + link.refined_vertex_id,
                     "stage" + std::to_string(base_stage) + ":" + link.base_vertex_id});

  Ontology merged = refine(base, ext, links);
  write_file(args.out_path, save_ontology(merged));
  std::cout << "wrote " << args.out_path << " (stage " << merged.stage_version
            << ", " << merged.vertices.size() << " vertices, "
            << merged.arcs.size() << " arcs)\n";

  if (!args.rsl_path.empty()) {
    auto requirements = parse_rsl_unchecked(read_file(args.rsl_path), raw);
    for (const auto& r : requirements) {
      std::string prefix = "stage" + std::to_string(r.ontology_stage) + ":";
      for (const auto& name :
           check_traceability(requirement_atoms(r), merged, prefix))
        std::cout << "warning: concept '" << name << "' in requirement '"
                  << r.id << "' has no refinement link\n";
    }
  }
  return 0;
}

struct GenArgs {
  std::vector<std::string> ontology_paths;
  std::string rsl_path;
  std::string out_dir;
  int max_depth = kDefaultMaxDepth;
  int max_repeat = kDefaultMaxTransitionRepeat;
  int stage = 0;  // 0 = all stages
};

json test_cases_json(const Requirement& r, const std::vector<TestCase>& cases) {
  json doc = json::object();
  doc["requirement"] = r.id;
  doc["stage"] = r.ontology_stage;
  doc["test_cases"] = json::array();
  for (const auto& tc : cases) {
    json jtc = json::object();
    jtc["id"] = tc.id;
    jtc["steps"] = json::array();
    for (const auto& step : tc.steps) {
      json jstep = json::object();
      jstep["pre"] = canonical(step.pre);
      if (step.post) jstep["post"] = canonical(*step.post);
      else jstep["post"] = nullptr;
      jtc["steps"].push_back(std::move(jstep));
    }
    doc["test_cases"].push_back(std::move(jtc));
  }
  return doc;
}

int cmd_gen(const GenArgs& args) {
  auto ontologies = load_ontologies(args.ontology_paths);
  auto requirements = parse_rsl_unchecked(read_file(args.rsl_path), ontologies);

  int violations = 0;
  for (const auto& r : requirements) {
    const Ontology& o = ontologies[static_cast<size_t>(r.ontology_stage) - 1];
    for (const auto& v : validate_requirement(r, o)) {
      std::cout << args.rsl_path << ": " << to_string(v) << "\n";
      ++violations;
    }
  }
  if (violations) {
    std::cout << violations << " violation(s), nothing generated\n";
    return 1;
  }

  fs::create_directories(args.out_dir);
  for (const auto& r : requirements) {
    if (args.stage != 0 && r.ontology_stage != args.stage) continue;
    TestCaseTree tree = build_tree(r, args.max_depth, args.max_repeat);
    auto cases = generate(r, args.max_depth, args.max_repeat, r.ontology_stage);
    write_file(fs::path(args.out_dir) / (r.id + ".tc.json"),
               test_cases_json(r, cases).dump(2) + "\n");
    write_file(fs::path(args.out_dir) / (r.id + ".csv"), export_csv(cases));
    std::cout << r.id << ": " << cases.size() << " test case(s), "
              << tree.leaves.size() << " leaf/leaves\n";
    if (tree.leaves.empty())
      std::cout << "warning: no release reachable within bounds for " << r.id
                << "\n";
  }
  return 0;
}

struct SimulateArgs {
  std::vector<std::string> ontology_paths;
  std::string params_path;
  std::vector<std::string> scenario_paths;
  std::string variant = "both";
  std::string out_dir;
};

int cmd_simulate(const SimulateArgs& args) {
  auto ontologies = load_ontologies(args.ontology_paths);
  PlantParams params;
  if (!args.params_path.empty()) params = load_params(read_file(args.params_path));
  AtomBinding binding = default_binding(ontologies.back());

  std::vector<Variant> variants;
  if (args.variant == "model" || args.variant == "both")
    variants.push_back(Variant::Model);
  if (args.variant == "plant" || args.variant == "both")
    variants.push_back(Variant::Plant);

  fs::create_directories(args.out_dir);
  for (const auto& scenario_path : args.scenario_paths) {
    auto script = load_scenario(read_file(scenario_path));
    std::string stem = fs::path(scenario_path).stem().string();
    for (Variant variant : variants) {
      Trace trace = run_scenario(params, script, binding, variant);
      std::string name = stem + "_" + to_string(variant) + ".trace.csv";
      write_file(fs::path(args.out_dir) / name, save_trace_csv(trace));
      std::cout << name << ": " << trace.samples.size() << " samples\n";
    }
  }
  return 0;
}

struct ExecArgs {
  std::string out_dir;
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string report_text(const SuiteReport& report) {
  std::string out = std::string("generated-by: ") + kVersionLine + "\n";
  for (const auto& cell : report.cells) {
    out += cell.test_case_id + " on " + cell.trace_name + ": ";
    if (cell.verdict) out += to_string(*cell.verdict);
    else out += "error: " + cell.error;
    out += "\n";
  }
  out += "passed " + std::to_string(report.pass) + ", failed " +
         std::to_string(report.fail) + ", not triggered " +
         std::to_string(report.not_triggered) + ", errors " +
         std::to_string(report.errors) + "\n";
  return out;
}

json report_json(const SuiteReport& report) {
  json doc = json::object();
  doc["generated-by"] = kVersionLine;
  doc["cells"] = json::array();
  for (const auto& cell : report.cells) {
    json jcell = json::object();
    jcell["test_case_id"] = cell.test_case_id;
    jcell["trace"] = cell.trace_name;
    if (cell.verdict) {
      const Verdict& v = *cell.verdict;
      json jv = json::object();
      switch (v.kind) {
        case Verdict::Kind::Pass:
          jv["kind"] = "Pass";
          jv["released"] = v.released;
          break;
        case Verdict::Kind::Fail:
          jv["kind"] = "Fail";
          jv["step_index"] = v.step + 1;
          jv["time"] = v.time;
          jv["condition"] = v.violated ? canonical(*v.violated) : "";
          break;
        case Verdict::Kind::NotTriggered:
          jv["kind"] = "NotTriggered";
          break;
      }
      jcell["verdict"] = std::move(jv);
    } else {
      jcell["error"] = cell.error;
    }
    doc["cells"].push_back(std::move(jcell));
  }
  doc["counts"] = {{"pass", report.pass},
                   {"fail", report.fail},
                   {"not_triggered", report.not_triggered},
                   {"errors", report.errors}};
  return doc;
}

int report_exit_code(const SuiteReport& report) {
  if (report.errors > 0) return 2;
  if (report.fail > 0) return 1;
  return 0;
}

int cmd_exec(const ExecArgs& args) {
  if (!fs::is_directory(args.out_dir))
    throw Error("'" + args.out_dir + "' is not a directory");

  std::vector<fs::path> case_files;
  std::vector<fs::path> trace_files;
  for (const auto& entry : fs::directory_iterator(args.out_dir)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    if (ends_with(name, ".trace.csv")) trace_files.push_back(entry.path());
    else if (ends_with(name, ".csv")) case_files.push_back(entry.path());
  }
  std::sort(case_files.begin(), case_files.end());
  std::sort(trace_files.begin(), trace_files.end());

  std::vector<TestCase> cases;
  for (const auto& path : case_files) {
    try {
      auto loaded = import_csv(read_file(path));
      cases.insert(cases.end(), loaded.begin(), loaded.end());
    } catch (const Error& e) {
      throw Error("'" + path.string() + "': " + e.what());
    }
  }
  std::map<std::string, Trace> traces;
  for (const auto& path : trace_files) {
    std::string name = path.filename().string();
    name.resize(name.size() - std::string(".trace.csv").size());
    try {
      traces[name] = load_trace_csv(read_file(path));
    } catch (const Error& e) {
      throw Error("'" + path.string() + "': " + e.what());
    }
  }

  SuiteReport report = run_suite(cases, traces);
  std::string text = report_text(report);
  write_file(fs::path(args.out_dir) / "report.txt", text);
  write_file(fs::path(args.out_dir) / "report.json",
             report_json(report).dump(2) + "\n");
  std::cout << text;
  return report_exit_code(report);
}

int cmd_report(const ExecArgs& args) {
  json doc;
  try {
    doc = json::parse(read_file(fs::path(args.out_dir) / "report.json"));
  } catch (const json::exception& e) {
    throw Error(std::string("invalid report.json: ") + e.what());
  }

  SuiteReport report;
  if (!doc.is_object() || !doc.contains("cells") || !doc["cells"].is_array())
    throw Error("report.json has no cell list");
  for (const auto& jcell : doc["cells"]) {
    SuiteCell cell;
    cell.test_case_id = jcell.value("test_case_id", std::string());
    cell.trace_name = jcell.value("trace", std::string());
    if (jcell.contains("verdict")) {
      const auto& jv = jcell["verdict"];
      std::string kind = jv.value("kind", std::string());
      if (kind == "Pass") {
        cell.verdict = Verdict::pass(jv.value("released", false));
      } else if (kind == "Fail") {
        BoolExpr condition = parse_expr(jv.value("condition", std::string("false")));
        cell.verdict = Verdict::fail(jv.value("step_index", 1) - 1,
                                     jv.value("time", 0.0), condition);
      } else if (kind == "NotTriggered") {
        cell.verdict = Verdict::not_triggered();
      } else {
        throw Error("report.json has an unknown verdict kind '" + kind + "'");
      }
      switch (cell.verdict->kind) {
        case Verdict::Kind::Pass: ++report.pass; break;
        case Verdict::Kind::Fail: ++report.fail; break;
        case Verdict::Kind::NotTriggered: ++report.not_triggered; break;
      }
    } else {
      cell.error = jcell.value("error", std::string("unknown error"));
      ++report.errors;
    }
    report.cells.push_back(std::move(cell));
  }
  std::cout << report_text(report);
  return report_exit_code(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Requirement-based test generation and execution"};
  app.require_subcommand(1);

  ValidateArgs validate_args;
  auto* validate_cmd =
      app.add_subcommand("validate", "Check ontology and requirement rules");
  validate_cmd->add_option("--ontology", validate_args.ontology_paths,
                           "Ontology files, one per stage in order")
      ->required();
  validate_cmd->add_option("--rsl", validate_args.rsl_path, "Requirement file")
      ->required();

  RefineArgs refine_args;
  auto* refine_cmd =
      app.add_subcommand("refine", "Merge two stages into one namespaced graph");
  refine_cmd->add_option("--ontology", refine_args.ontology_paths,
                         "Base then extension ontology")
      ->expected(2)
      ->required();
  refine_cmd->add_option("--links", refine_args.links_path,
                         "Refinement links file")
      ->required();
  refine_cmd->add_option("--out", refine_args.out_path, "Merged ontology output path")
      ->required();
  refine_cmd->add_option("--rsl", refine_args.rsl_path,
                         "Requirement file for traceability warnings");

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen", "Generate test cases");
  gen_cmd->add_option("--ontology", gen_args.ontology_paths,
                      "Ontology files, one per stage in order")
      ->required();
  gen_cmd->add_option("--rsl", gen_args.rsl_path, "Requirement file")->required();
  gen_cmd->add_option("--out", gen_args.out_dir, "Output directory")->required();
  gen_cmd->add_option("--max-depth", gen_args.max_depth, "Tree depth bound");
  gen_cmd->add_option("--max-repeat", gen_args.max_repeat,
                      "Per-path transition repeat bound");
  gen_cmd->add_option("--stage", gen_args.stage, "Only this stage (default all)");

  SimulateArgs simulate_args;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run scenarios to traces");
  simulate_cmd->add_option("--ontology", simulate_args.ontology_paths,
                           "Ontology files; the last one binds the atoms")
      ->required();
  simulate_cmd->add_option("--params", simulate_args.params_path,
                           "Plant parameter overrides");
  simulate_cmd->add_option("--scenario", simulate_args.scenario_paths,
                           "Scenario script(s)")
      ->required();
  simulate_cmd->add_option("--variant", simulate_args.variant, "model, plant, or both")
      ->check(CLI::IsMember({"model", "plant", "both"}));
  simulate_cmd->add_option("--out", simulate_args.out_dir, "Output directory")
      ->required();

  ExecArgs exec_args;
  auto* exec_cmd =
      app.add_subcommand("exec", "Execute test-case CSVs over trace CSVs");
  exec_cmd->add_option("--out", exec_args.out_dir,
                       "Directory holding *.csv cases and *.trace.csv traces")
      ->required();

  ExecArgs report_args;
  auto* report_cmd = app.add_subcommand("report", "Re-render report.json");
  report_cmd->add_option("--out", report_args.out_dir,
                         "Directory holding report.json")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(validate_args);
    if (refine_cmd->parsed()) return cmd_refine(refine_args);
    if (gen_cmd->parsed()) return cmd_gen(gen_args);
    if (simulate_cmd->parsed()) return cmd_simulate(simulate_args);
    if (exec_cmd->parsed()) return cmd_exec(exec_args);
    if (report_cmd->parsed()) return cmd_report(report_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
