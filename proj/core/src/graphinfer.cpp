#include "taskgraph/graphinfer.hpp"

#include <algorithm>
#include <cmath>

#include "taskgraph/errors.hpp"
#include "taskgraph/rng.hpp"

namespace taskgraph {

std::vector<EligibilityExample> to_examples(const KeyStepSequence& h, int m,
                                            double negative_weight) {
  const std::size_t n = h.items.size();
  std::vector<bool> seen(m + 1, false);
  std::vector<std::uint64_t> before(n);  // completion bits strictly before i
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int p = h.items[i].key_step_id;
    if (p < 1 || p > m) {
      throw InvalidInputError("key step id " + std::to_string(p) +
                              " outside 1.." + std::to_string(m));
    }
    if (seen[p]) {
      throw InvalidInputError("key step " + std::to_string(p) +
                              " appears twice in sequence " + h.video_id);
    }
    seen[p] = true;
    before[i] = bits;
    bits |= std::uint64_t{1} << (p - 1);
  }

  std::vector<EligibilityExample> out;
  out.reserve(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({{before[i], m}, h.items[i].key_step_id, true, 1.0});
    for (std::size_t j = i + 1; j < n; ++j) {
      out.push_back(
          {{before[i], m}, h.items[j].key_step_id, false, negative_weight});
    }
  }
  return out;
}

namespace {

struct ClassWeights {
  double positive = 0.0;
  double negative = 0.0;
  int positive_count = 0;

  double total() const { return positive + negative; }
  double gini() const {
    const double tot = total();
    if (tot <= 0.0) return 0.0;
    const double fp = positive / tot;
    const double fn = negative / tot;
    return 1.0 - fp * fp - fn * fn;
  }
};

ClassWeights tally(const std::vector<const EligibilityExample*>& examples) {
  ClassWeights w;
  for (const auto* ex : examples) {
    if (ex->eligible) {
      w.positive += ex->weight;
      ++w.positive_count;
    } else {
      w.negative += ex->weight;
    }
  }
  return w;
}

constexpr double kImpurityEps = 1e-12;

class TreeBuilder {
 public:
  TreeBuilder(int m) : m_(m) {}

  int build(const std::vector<const EligibilityExample*>& examples, int depth,
            std::uint64_t used_bits, std::vector<TreeNode>& nodes) {
    const ClassWeights w = tally(examples);
    const double node_gini = w.gini();

    int best_step = 0;
    double best_cost = node_gini - kImpurityEps;
    if (w.positive > 0.0 && w.negative > 0.0 && depth < m_) {
      for (int q = 1; q <= m_; ++q) {
        if ((used_bits >> (q - 1)) & 1u) continue;
        ClassWeights lo, hi;
        for (const auto* ex : examples) {
          ClassWeights& side = ex->completion.test(q) ? hi : lo;
          if (ex->eligible) {
            side.positive += ex->weight;
          } else {
            side.negative += ex->weight;
          }
        }
        const double cost =
            (lo.total() * lo.gini() + hi.total() * hi.gini()) / w.total();
        if (cost < best_cost - kImpurityEps) {
          best_cost = cost;
          best_step = q;
        }
      }
    }

    if (best_step == 0) {
      TreeNode leaf;
      leaf.positive_count = w.positive_count;
      leaf.negative_weight = w.negative;
      leaf.predicted_label = w.positive_count > 0;
      nodes.push_back(leaf);
      return static_cast<int>(nodes.size()) - 1;
    }

    std::vector<const EligibilityExample*> lo, hi;
    for (const auto* ex : examples) {
      (ex->completion.test(best_step) ? hi : lo).push_back(ex);
    }
    const int index = static_cast<int>(nodes.size());
    nodes.push_back({});  // placeholder; children are appended after it
    const std::uint64_t used = used_bits | (std::uint64_t{1} << (best_step - 1));
    const int low = build(lo, depth + 1, used, nodes);
    const int high = build(hi, depth + 1, used, nodes);
    nodes[index].split_step = best_step;
    nodes[index].low = low;
    nodes[index].high = high;
    return index;
  }

 private:
  int m_;
};

}  // namespace

PreconditionFunction fit_precondition_tree(
    const std::vector<EligibilityExample>& examples, int step, int m) {
  PreconditionFunction f;
  f.step = step;

  std::vector<const EligibilityExample*> mine;
  for (const auto& ex : examples) {
    if (ex.step == step) mine.push_back(&ex);
  }

  const bool any_positive =
      std::any_of(mine.begin(), mine.end(),
                  [](const EligibilityExample* ex) { return ex->eligible; });
  if (!any_positive) {
    // no evidence the step is ever eligible: trivial always-ineligible leaf
    TreeNode leaf;
    leaf.negative_weight = tally(mine).negative;
    leaf.predicted_label = false;
    f.nodes.push_back(leaf);
    return f;
  }

  TreeBuilder builder(m);
  builder.build(mine, 0, 0, f.nodes);
  return f;
}

DnfPrecondition tree_to_dnf(const PreconditionFunction& f) {
  std::vector<std::vector<int>> terms;
  if (!f.nodes.empty()) {
    // DFS enumerating root-to-eligible-leaf paths; keep bits tested = 1
    std::vector<std::pair<int, std::vector<int>>> stack;
    stack.emplace_back(0, std::vector<int>{});
    while (!stack.empty()) {
      auto [at, positives] = std::move(stack.back());
      stack.pop_back();
      const TreeNode& node = f.nodes[at];
      if (node.leaf()) {
        if (node.predicted_label) terms.push_back(positives);
        continue;
      }
      stack.emplace_back(node.low, positives);
      positives.push_back(node.split_step);
      stack.emplace_back(node.high, std::move(positives));
    }
  }
  return normalize_dnf(f.step, std::move(terms));
}

TaskGraph infer_graph(const std::vector<KeyStepSequence>& sequences, int m,
                      const InferConfig& config,
                      std::vector<std::string> labels) {
  if (sequences.empty()) {
    throw InvalidInputError("graph inference needs at least one sequence");
  }
  if (labels.empty()) {
    for (int p = 1; p <= m; ++p) labels.push_back("k" + std::to_string(p));
  }
  if (static_cast<int>(labels.size()) != m) {
    throw InvalidInputError("expected " + std::to_string(m) +
                            " step labels, got " +
                            std::to_string(labels.size()));
  }

  std::vector<EligibilityExample> examples;
  for (const auto& h : sequences) {
    auto ex = to_examples(h, m, config.negative_weight);
    examples.insert(examples.end(), ex.begin(), ex.end());
  }

  std::vector<PreconditionFunction> functions;
  std::vector<DnfPrecondition> dnfs;
  functions.reserve(m);
  for (int p = 1; p <= m; ++p) {
    functions.push_back(fit_precondition_tree(examples, p, m));
    dnfs.push_back(tree_to_dnf(functions.back()));
  }

  TaskGraph graph = consolidate_graph(dnfs, labels);
  graph.functions = std::move(functions);
  return graph;
}

double eval_accuracy(const TaskGraph& predicted, const TaskGraph& truth,
                     AccuracyMode mode, std::uint64_t seed) {
  if (predicted.m != truth.m) {
    throw InvalidInputError("graphs disagree on m: " +
                            std::to_string(predicted.m) + " vs " +
                            std::to_string(truth.m));
  }
  const int m = predicted.m;
  if (m == 0) return 1.0;
  if (mode == AccuracyMode::automatic) {
    mode = m <= 16 ? AccuracyMode::exact : AccuracyMode::sampled;
  }

  double total = 0.0;
  if (mode == AccuracyMode::exact) {
    if (m > 24) {
      throw InvalidInputError("exact enumeration is limited to m <= 24");
    }
    const std::uint64_t count = std::uint64_t{1} << m;
    for (int p = 1; p <= m; ++p) {
      std::uint64_t agree = 0;
      for (std::uint64_t c = 0; c < count; ++c) {
        if (predicted.step_eligible(p, c) == truth.step_eligible(p, c)) {
          ++agree;
        }
      }
      total += static_cast<double>(agree) / static_cast<double>(count);
    }
  } else {
    constexpr int kSamples = 10000;
    Rng rng(seed);
    std::vector<std::uint64_t> draws(kSamples);
    for (auto& c : draws) {
      c = rng.next();
      if (m < 64) c &= (std::uint64_t{1} << m) - 1;
    }
    for (int p = 1; p <= m; ++p) {
      int agree = 0;
      for (std::uint64_t c : draws) {
        if (predicted.step_eligible(p, c) == truth.step_eligible(p, c)) {
          ++agree;
        }
      }
      total += static_cast<double>(agree) / kSamples;
    }
  }
  return total / m;
}

}  // namespace taskgraph
