#include "taskgraph/graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "taskgraph/errors.hpp"

namespace taskgraph {

bool DnfPrecondition::satisfied(std::uint64_t completion_bits) const {
  if (always_true) return true;
  for (const auto& term : terms) {
    bool all = true;
    for (int q : term) {
      if (!((completion_bits >> (q - 1)) & 1u)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

DnfPrecondition normalize_dnf(int step, std::vector<std::vector<int>> terms) {
  DnfPrecondition dnf;
  dnf.step = step;
  for (auto& term : terms) {
    std::sort(term.begin(), term.end());
    term.erase(std::unique(term.begin(), term.end()), term.end());
    if (term.empty()) {
      dnf.always_true = true;
      dnf.terms.clear();
      return dnf;
    }
  }
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  // absorption: drop any term that is a strict superset of another
  // (terms are deduplicated, so subset + different size implies strict)
  std::vector<bool> absorbed(terms.size(), false);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = 0; j < terms.size() && !absorbed[i]; ++j) {
      if (i == j || terms[j].size() >= terms[i].size()) continue;
      absorbed[i] = std::includes(terms[i].begin(), terms[i].end(),
                                  terms[j].begin(), terms[j].end());
    }
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!absorbed[i]) dnf.terms.push_back(std::move(terms[i]));
  }
  return dnf;
}

bool PreconditionFunction::evaluate(std::uint64_t completion_bits) const {
  if (nodes.empty()) return false;
  int at = 0;
  while (!nodes[at].leaf()) {
    const TreeNode& n = nodes[at];
    at = ((completion_bits >> (n.split_step - 1)) & 1u) ? n.high : n.low;
  }
  return nodes[at].predicted_label;
}

bool TaskGraph::step_eligible(int step, std::uint64_t completion_bits) const {
  if (step < 1 || step > m) {
    throw InvalidInputError("step id " + std::to_string(step) +
                            " out of range 1.." + std::to_string(m));
  }
  if (has_functions()) return functions[step - 1].evaluate(completion_bits);
  return preconditions[step - 1].satisfied(completion_bits);
}

const std::string& TaskGraph::step_label(int step) const {
  return nodes[step - 1].label;
}

std::vector<bool> eligibility(const TaskGraph& graph, const CompletionVector& c) {
  if (c.m != graph.m) {
    throw InvalidInputError("completion vector length " + std::to_string(c.m) +
                            " does not match graph m=" + std::to_string(graph.m));
  }
  std::vector<bool> e(graph.m);
  for (int p = 1; p <= graph.m; ++p) e[p - 1] = graph.step_eligible(p, c.bits);
  return e;
}

namespace {

// Cycle in the step dependency projection (edge q -> p when q appears in a
// term of p's precondition), found by three-color DFS. Recursion depth is
// bounded by m. Returns one cycle in edge order, or empty when acyclic.
class DependencyCycleFinder {
 public:
  DependencyCycleFinder(const std::vector<DnfPrecondition>& dnfs, int m)
      : deps_(m + 1), state_(m + 1, 0) {
    for (const auto& dnf : dnfs) {
      std::set<int> uniq;
      for (const auto& term : dnf.terms) uniq.insert(term.begin(), term.end());
      deps_[dnf.step].assign(uniq.begin(), uniq.end());
    }
  }

  std::vector<int> find() {
    const int m = static_cast<int>(state_.size()) - 1;
    for (int p = 1; p <= m; ++p) {
      if (state_[p] == 0 && visit(p)) return cycle_;
    }
    return {};
  }

 private:
  bool visit(int p) {
    state_[p] = 1;
    path_.push_back(p);
    for (int q : deps_[p]) {
      if (state_[q] == 1) {
        auto it = std::find(path_.begin(), path_.end(), q);
        cycle_.assign(it, path_.end());
        return true;
      }
      if (state_[q] == 0 && visit(q)) return true;
    }
    state_[p] = 2;
    path_.pop_back();
    return false;
  }

  std::vector<std::vector<int>> deps_;
  std::vector<int> state_;  // 0 new, 1 on path, 2 done
  std::vector<int> path_;
  std::vector<int> cycle_;
};

std::vector<int> find_dependency_cycle(const std::vector<DnfPrecondition>& dnfs,
                                       int m) {
  return DependencyCycleFinder(dnfs, m).find();
}

std::string quote_dot(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  out.push_back('"');
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

}  // namespace

TaskGraph consolidate_graph(const std::vector<DnfPrecondition>& dnfs,
                            const std::vector<std::string>& labels) {
  const int m = static_cast<int>(labels.size());
  std::vector<DnfPrecondition> by_step(m);
  for (int p = 1; p <= m; ++p) {
    by_step[p - 1].step = p;
    by_step[p - 1].always_true = true;
  }
  for (const auto& dnf : dnfs) {
    if (dnf.step < 1 || dnf.step > m) {
      throw InvalidInputError("precondition references step " +
                              std::to_string(dnf.step) + " outside 1.." +
                              std::to_string(m));
    }
    by_step[dnf.step - 1] = dnf;
  }

  const std::vector<int> cycle = find_dependency_cycle(by_step, m);
  if (!cycle.empty()) {
    std::ostringstream msg;
    msg << "cyclic step dependencies:";
    for (int p : cycle) msg << " " << p;
    msg << " -> " << cycle.front();
    throw CyclicGraphError(msg.str(), cycle);
  }

  TaskGraph graph;
  graph.m = m;
  graph.preconditions = by_step;
  for (int p = 1; p <= m; ++p) {
    graph.nodes.push_back({p, NodeKind::step, labels[p - 1]});
  }

  int next_id = m + 1;
  for (int p = 1; p <= m; ++p) {
    const DnfPrecondition& dnf = by_step[p - 1];
    if (dnf.trivial()) continue;

    int target = p;  // node the term parents attach to
    if (dnf.terms.size() > 1) {
      graph.nodes.push_back({next_id, NodeKind::or_node, "OR"});
      graph.edges.emplace_back(next_id, p);
      target = next_id++;
    }
    for (const auto& term : dnf.terms) {
      if (term.size() == 1) {
        graph.edges.emplace_back(term.front(), target);
      } else {
        graph.nodes.push_back({next_id, NodeKind::and_node, "AND"});
        graph.edges.emplace_back(next_id, target);
        for (int q : term) graph.edges.emplace_back(q, next_id);
        ++next_id;
      }
    }
  }
  return graph;
}

std::string export_dot(const TaskGraph& graph) {
  std::ostringstream out;
  out << "digraph taskgraph {\n";
  out << "  rankdir=TB;\n";
  for (const auto& node : graph.nodes) {
    out << "  n" << node.id;
    if (node.kind == NodeKind::step) {
      out << " [shape=box, label=" << quote_dot(node.label) << "];\n";
    } else {
      out << " [shape=diamond, label=\""
          << (node.kind == NodeKind::and_node ? "AND" : "OR")
          << "\", fixedsize=true, width=0.9, height=0.5];\n";
    }
  }
  for (const auto& [src, dst] : graph.edges) {
    out << "  n" << src << " -> n" << dst << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace taskgraph
