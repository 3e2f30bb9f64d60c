#ifndef TASKGRAPH_GRAPH_HPP
#define TASKGRAPH_GRAPH_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace taskgraph {

/// Binary vector marking which key steps have been performed. Bit p-1
/// corresponds to key step p (ids are 1-based throughout).
struct CompletionVector {
  std::uint64_t bits = 0;
  int m = 0;

  bool test(int step) const { return (bits >> (step - 1)) & 1u; }
  void set(int step) { bits |= std::uint64_t{1} << (step - 1); }
};

/// Precondition of one key step in disjunctive normal form: the step is
/// eligible when every key step of at least one term is complete. All
/// literals are positive. An empty term list means "always eligible" when
/// always_true is set and "never eligible" otherwise.
struct DnfPrecondition {
  int step = 0;
  bool always_true = false;
  std::vector<std::vector<int>> terms;  // each sorted ascending; terms sorted

  bool trivial() const { return always_true || terms.empty(); }
  bool never_eligible() const { return !always_true && terms.empty(); }
  bool satisfied(std::uint64_t completion_bits) const;
};

/// Removes terms that are supersets of another term, deduplicates and sorts.
/// An empty term makes the precondition always_true.
DnfPrecondition normalize_dnf(int step, std::vector<std::vector<int>> terms);

/// Per-step eligibility predictor: a binary decision tree whose internal
/// nodes test one completion bit. Stored as a flat node array, root at 0.
struct TreeNode {
  int split_step = 0;  // key step id tested; 0 for leaves
  int low = -1;        // child when the tested bit is 0
  int high = -1;       // child when the tested bit is 1
  int positive_count = 0;
  double negative_weight = 0.0;
  bool predicted_label = false;

  bool leaf() const { return split_step == 0; }
};

struct PreconditionFunction {
  int step = 0;
  std::vector<TreeNode> nodes;

  bool evaluate(std::uint64_t completion_bits) const;
};

enum class NodeKind { step, and_node, or_node };

struct GraphNode {
  int id = 0;
  NodeKind kind = NodeKind::step;
  std::string label;
};

/// AND/OR task graph over key steps 1..m. Step nodes carry ids 1..m; AND/OR
/// helper nodes are appended after them. Edges run parent -> child ("parent
/// must be satisfied before child"). The DNF preconditions drive the edge
/// structure; fitted decision trees, when present, are kept alongside so
/// that accuracy evaluation can use the full learned function rather than
/// the positive-literal export.
struct TaskGraph {
  int m = 0;
  std::vector<GraphNode> nodes;
  std::vector<std::pair<int, int>> edges;
  std::vector<DnfPrecondition> preconditions;   // index p-1
  std::vector<PreconditionFunction> functions;  // empty or index p-1

  bool has_functions() const { return !functions.empty(); }
  bool step_eligible(int step, std::uint64_t completion_bits) const;
  const std::string& step_label(int step) const;
};

/// Evaluates every step's precondition on a completion vector.
/// Throws InvalidInputError when the vector length does not match the graph.
std::vector<bool> eligibility(const TaskGraph& graph, const CompletionVector& c);

/// Builds the AND/OR graph from per-step DNF preconditions. AND/OR nodes
/// with a single argument are elided. Throws CyclicGraphError when the step
/// dependency projection contains a cycle; the error lists one cycle.
TaskGraph consolidate_graph(const std::vector<DnfPrecondition>& dnfs,
                            const std::vector<std::string>& labels);

/// DOT rendering: step nodes as labeled boxes, AND/OR nodes as diamonds.
/// Node and edge order is deterministic.
std::string export_dot(const TaskGraph& graph);

}  // namespace taskgraph

#endif  // TASKGRAPH_GRAPH_HPP
