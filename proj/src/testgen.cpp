#include "reqtest/testgen.hpp"

#include <deque>
#include <map>

namespace reqtest {

namespace {

BoolExpr stay_conjunction(const Requirement& r, const std::string& q) {
  auto it = r.stay.find(q);
  if (it == r.stay.end()) return BoolExpr::constant(true);
  return conjoin(it->second);
}

// Transition uses on the path from the root to `node`, keyed by
// transition index.
int uses_on_path(const TestCaseTree& tree, int node, int transition) {
  int count = 0;
  for (int n = node; n != -1; n = tree.nodes[n].parent)
    if (tree.nodes[n].via_transition == transition) ++count;
  return count;
}

}  // namespace

TestCaseTree build_tree(const Requirement& r, int max_depth,
                        int max_transition_repeat) {
  TestCaseTree tree;
  tree.nodes.push_back({});
  if (r.states.empty()) return tree;
  const std::string& q0 = r.states.front();

  std::deque<int> frontier;
  auto add_child = [&](int parent, TestCaseTree::Node node) {
    node.parent = parent;
    node.depth = tree.nodes[parent].depth + 1;
    int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(std::move(node));
    tree.nodes[parent].children.push_back(id);
    return id;
  };

  if (max_depth >= 1) {
    for (const auto& ec : r.entry_conditions) {
      TestCaseTree::Node node;
      node.state = q0;
      node.incoming = ec;
      node.post = stay_conjunction(r, q0);
      frontier.push_back(add_child(0, node));
    }
  }

  while (!frontier.empty()) {
    int id = frontier.front();
    frontier.pop_front();
    if (tree.nodes[id].depth + 1 > max_depth) continue;
    const std::string state = tree.nodes[id].state;

    for (size_t t = 0; t < r.transitions.size(); ++t) {
      const Transition& tr = r.transitions[t];
      if (tr.source != state) continue;
      if (uses_on_path(tree, id, static_cast<int>(t)) >= max_transition_repeat)
        continue;
      TestCaseTree::Node node;
      node.state = tr.target;
      node.incoming = conjoin(tr.guards);
      node.post = stay_conjunction(r, tr.target);
      node.via_transition = static_cast<int>(t);
      frontier.push_back(add_child(id, node));
    }

    for (const auto& [q, rc] : r.release_conditions) {
      if (q != state) continue;
      TestCaseTree::Node node;
      node.state = q;
      node.incoming = rc;
      node.is_release = true;
      int leaf = add_child(id, node);
      tree.leaves.push_back(leaf);
    }
  }

  // Children were appended frontier-first, so node order is already
  // breadth-first; leaves were collected in that same order.
  return tree;
}

std::vector<TestCase> generate(const Requirement& r, int max_depth,
                               int max_transition_repeat, int stage) {
  TestCaseTree tree = build_tree(r, max_depth, max_transition_repeat);
  std::vector<TestCase> out;
  int n = 0;
  for (int leaf : tree.leaves) {
    ++n;
    TestCase tc;
    tc.id = r.id + "_TC" + std::to_string(n) + "_V" + std::to_string(stage);

    std::vector<int> path;
    for (int node = leaf; node != 0; node = tree.nodes[node].parent)
      path.push_back(node);
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      const auto& node = tree.nodes[*it];
      tc.steps.push_back(TestStep{*node.incoming,
                                  node.is_release
                                      ? std::nullopt
                                      : std::optional<BoolExpr>(*node.post)});
    }
    out.push_back(std::move(tc));
  }
  return out;
}

std::set<StepSeq> step_sequences(const std::vector<TestCase>& cases) {
  std::set<StepSeq> out;
  for (const auto& tc : cases) {
    StepSeq seq;
    for (const auto& step : tc.steps)
      seq.emplace_back(canonical(step.pre),
                       step.post ? canonical(*step.post) : "null");
    out.insert(std::move(seq));
  }
  return out;
}

namespace {

// Direct recursion over the FSM; shares no code or data with build_tree.
void oracle_walk(const Requirement& r, const std::string& state, int depth,
                 int max_depth, int max_transition_repeat,
                 std::map<size_t, int>& uses, StepSeq& steps,
                 std::set<StepSeq>& out) {
  if (depth + 1 > max_depth) return;

  for (const auto& [q, rc] : r.release_conditions) {
    if (q != state) continue;
    steps.emplace_back(canonical(rc), "null");
    out.insert(steps);
    steps.pop_back();
  }

  for (size_t t = 0; t < r.transitions.size(); ++t) {
    const Transition& tr = r.transitions[t];
    if (tr.source != state) continue;
    if (uses[t] >= max_transition_repeat) continue;
    ++uses[t];
    auto stay = r.stay.find(tr.target);
    steps.emplace_back(canonical(conjoin(tr.guards)),
                       canonical(stay == r.stay.end()
                                     ? BoolExpr::constant(true)
                                     : conjoin(stay->second)));
    oracle_walk(r, tr.target, depth + 1, max_depth, max_transition_repeat,
                uses, steps, out);
    steps.pop_back();
    --uses[t];
  }
}

}  // namespace

std::set<StepSeq> path_oracle(const Requirement& r, int max_depth,
                              int max_transition_repeat) {
  std::set<StepSeq> out;
  if (r.states.empty() || max_depth < 1) return out;
  const std::string& q0 = r.states.front();
  auto stay = r.stay.find(q0);
  for (const auto& ec : r.entry_conditions) {
    StepSeq steps;
    steps.emplace_back(canonical(ec),
                       canonical(stay == r.stay.end()
                                     ? BoolExpr::constant(true)
                                     : conjoin(stay->second)));
    std::map<size_t, int> uses;
    oracle_walk(r, q0, 1, max_depth, max_transition_repeat, uses, steps, out);
  }
  return out;
}

}  // namespace reqtest
