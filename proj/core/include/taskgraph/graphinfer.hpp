#ifndef TASKGRAPH_GRAPHINFER_HPP
#define TASKGRAPH_GRAPHINFER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "taskgraph/graph.hpp"
#include "taskgraph/sequence.hpp"

namespace taskgraph {

/// One training example for a step's precondition function. Positive
/// examples record observed eligibility (the step was executed next in some
/// sequence); negatives are weak assumptions (the step was executed later in
/// the same sequence) and carry a reduced weight.
struct EligibilityExample {
  CompletionVector completion;
  int step = 0;
  bool eligible = false;
  double weight = 1.0;
};

struct InferConfig {
  double negative_weight = 0.3;  // weight of assumed-ineligible examples
};

/// Converts one key step sequence into eligibility training examples.
///
/// For the step at position i the completion vector covers the steps at
/// positions strictly before i. That context yields one positive example for
/// the executed step and one weak negative for every step executed later in
/// the sequence. Throws InvalidInputError on duplicate steps or ids
/// outside 1..m.
std::vector<EligibilityExample> to_examples(const KeyStepSequence& h, int m,
                                            double negative_weight);

/// Fits the precondition decision tree for one step by greedy top-down
/// induction: each node splits on the completion bit minimizing weighted
/// Gini impurity (ties to the lowest step id) and stops when the node is
/// pure, no bit reduces impurity, or the depth reaches m. A leaf predicts
/// eligible iff at least one positive example reached it. Given no positive
/// examples at all, returns a trivial always-ineligible function.
PreconditionFunction fit_precondition_tree(
    const std::vector<EligibilityExample>& examples, int step, int m);

/// Extracts the DNF precondition from a fitted tree: one AND term of the
/// positively tested bits per root-to-eligible-leaf path. Negative literals
/// are dropped from the export; supersets are absorbed.
DnfPrecondition tree_to_dnf(const PreconditionFunction& f);

/// Full inference: examples from every sequence, one tree per step, DNF
/// extraction, AND/OR consolidation. The fitted trees are retained on the
/// returned graph. labels, when non-empty, must have size m; otherwise steps
/// are labeled "k1".."km".
TaskGraph infer_graph(const std::vector<KeyStepSequence>& sequences, int m,
                      const InferConfig& config,
                      std::vector<std::string> labels = {});

enum class AccuracyMode {
  automatic,  // exact when m <= 16, else sampled
  exact,
  sampled,
};

/// Fraction of (step, completion) pairs on which the two graphs' eligibility
/// functions agree, averaged per step. Exact mode enumerates all 2^m
/// completion vectors; sampled mode draws 10,000 uniform vectors from the
/// given seed. Throws InvalidInputError when the graphs disagree on m.
double eval_accuracy(const TaskGraph& predicted, const TaskGraph& truth,
                     AccuracyMode mode = AccuracyMode::automatic,
                     std::uint64_t seed = 0);

}  // namespace taskgraph

#endif  // TASKGRAPH_GRAPHINFER_HPP
