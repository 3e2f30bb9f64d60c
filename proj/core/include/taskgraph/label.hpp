#ifndef TASKGRAPH_LABEL_HPP
#define TASKGRAPH_LABEL_HPP

#include <string>
#include <utility>
#include <vector>

#include "taskgraph/cluster.hpp"
#include "taskgraph/sequence.hpp"

namespace taskgraph {

/// Highest cosine similarity between a summary step and any member of the
/// cluster, together with the member sentence attaining it (ties go to the
/// first member in stored order). Throws InvalidInputError on an empty
/// cluster.
std::pair<double, std::string> step_cluster_similarity(
    const EmbeddingVector& step_embedding, const KeyStep& cluster);

/// Greedy global alignment over a similarity matrix: repeatedly select the
/// highest entry (> 0), record the (row, column) pair and retire that row
/// and column. Ties resolve to the smallest row then column index. The
/// returned pairs are sorted by row. Exposed separately so the alignment
/// core can be checked against a reference implementation on raw matrices.
std::vector<std::pair<int, int>> greedy_align(
    const std::vector<std::vector<double>>& similarity);

/// Re-labels a summary step sequence with key steps. step_embeddings must
/// align with g.steps. Returns an empty sequence when every similarity
/// is <= 0.
KeyStepSequence label_sequence(const SummaryStepSequence& g,
                               const std::vector<EmbeddingVector>& step_embeddings,
                               const std::vector<KeyStep>& key_steps);

/// Convenience overload embedding the summary steps with the provider.
KeyStepSequence label_sequence(const SummaryStepSequence& g,
                               EmbeddingProvider& embedder,
                               const std::vector<KeyStep>& key_steps);

}  // namespace taskgraph

#endif  // TASKGRAPH_LABEL_HPP
