#ifndef TASKGRAPH_SIMULATE_HPP
#define TASKGRAPH_SIMULATE_HPP

#include <cstdint>
#include <vector>

#include "taskgraph/graph.hpp"
#include "taskgraph/sequence.hpp"

namespace taskgraph {

struct RolloutConfig {
  int count = 60;
  std::uint64_t seed = 0;
  double drop_prob = 0.0;  // per-step omission noise; 0 keeps rollouts exact
};

/// Samples one execution of the task: repeatedly performs a uniformly random
/// step among the eligible, not yet completed ones until all m steps are
/// complete. With drop_prob > 0 an executed step may be omitted from the
/// emitted sequence while still counting as completed. Identical seeds give
/// identical sequences. Throws InvalidGraphError when no step is eligible
/// before completion.
KeyStepSequence rollout(const TaskGraph& graph, std::uint64_t seed,
                        double drop_prob = 0.0);

/// config.count rollouts seeded config.seed, config.seed + 1, ...
std::vector<KeyStepSequence> generate_dataset(const TaskGraph& graph,
                                              const RolloutConfig& config);

struct RandomGraphConfig {
  int m = 6;
  double density = 0.4;
  std::uint64_t seed = 0;
  double or_prob = 0.2;  // chance a step takes a 2-term OR precondition
};

/// Samples a random acyclic positive-DNF precondition structure over a
/// random topological order. Each step acquires each earlier step as an AND
/// literal with probability density; with probability or_prob a step with at
/// least two earlier steps instead takes a 2-term OR over two of them.
/// Literals already guaranteed by another literal's own precondition chain
/// are dropped, so the sampled preconditions are observationally minimal.
/// The result is satisfiable by construction.
TaskGraph random_graph(const RandomGraphConfig& config);

/// Linear chain: step p requires step p-1.
TaskGraph chain_graph(int m);

}  // namespace taskgraph

#endif  // TASKGRAPH_SIMULATE_HPP
