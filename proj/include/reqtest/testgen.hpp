// Bounded unrolling of a requirement state machine into a test-case tree
// whose root-to-leaf paths are the test cases: entry condition in, release
// condition out, stay conditions checked in between.

#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "reqtest/rsl.hpp"

namespace reqtest {

inline constexpr int kDefaultMaxDepth = 16;
inline constexpr int kDefaultMaxTransitionRepeat = 1;

// One (pre-condition, post-condition) pair. A missing post-condition
// marks the final step of a test case, never an earlier one.
struct TestStep {
  BoolExpr pre;
  std::optional<BoolExpr> post;
  bool operator==(const TestStep&) const = default;
};

struct TestCase {
  std::string id;  // "<ReqId>_TC<n>_V<stage>"
  std::vector<TestStep> steps;
  bool operator==(const TestCase&) const = default;
};

// Bounded unrolling of the FSM. nodes[0] is a virtual root at depth 0;
// entry branches sit at depth 1; every further transition or release adds
// one level. Nodes are stored in breadth-first order, so leaves (release
// nodes) number shortest paths first.
struct TestCaseTree {
  struct Node {
    int parent = -1;
    int depth = 0;
    std::string state;                // FSM state occupied; empty at the root
    std::optional<BoolExpr> incoming; // condition taken to reach this node
    std::optional<BoolExpr> post;     // stay conjunction at this node
    bool is_release = false;
    int via_transition = -1;          // index into transitions, -1 otherwise
    std::vector<int> children;
  };
  std::vector<Node> nodes;
  std::vector<int> leaves;
};

// Breadth-first expansion: the root branches once per entry condition
// into the initial state; a node at state q gets one child per transition
// out of q (skipped once taken max_transition_repeat times on that path)
// and one release leaf per release condition on q. Children at depth
// > max_depth are not created. Zero leaves is a valid outcome.
TestCaseTree build_tree(const Requirement& r, int max_depth,
                        int max_transition_repeat);

// One test case per leaf: step 1 = (entry condition, stay conjunction of
// the initial state), one step per transition = (guard conjunction, stay
// conjunction of the target), final step = (release formula, none).
// Leaves are numbered TC1, TC2, ... in tree order, suffixed _V<stage>.
std::vector<TestCase> generate(const Requirement& r, int max_depth,
                               int max_transition_repeat, int stage);

// A step sequence as canonical text, post-conditions rendered "null" when
// absent; the shape compared by the oracle property.
using StepSeq = std::vector<std::pair<std::string, std::string>>;

std::set<StepSeq> step_sequences(const std::vector<TestCase>& cases);

// Exhaustive recursive enumeration of entry-to-release condition
// sequences under the same bounds, written directly against the FSM with
// no tree in sight; the independent oracle generate is tested against.
std::set<StepSeq> path_oracle(const Requirement& r, int max_depth,
                              int max_transition_repeat);

}  // namespace reqtest
