#ifndef TASKGRAPH_CLUSTER_HPP
#define TASKGRAPH_CLUSTER_HPP

#include <string>
#include <vector>

#include "taskgraph/embedding.hpp"
#include "taskgraph/providers.hpp"
#include "taskgraph/sequence.hpp"

namespace taskgraph {

/// One clustered step sentence. position is the 1-based index of the
/// sentence within its summary step sequence.
struct KeyStepMember {
  std::string sentence;
  std::string video_id;
  int position = 0;
  EmbeddingVector embedding;
};

/// A cluster of semantically equivalent step sentences: one key step.
struct KeyStep {
  int id = 0;  // 1..m after final re-indexing
  std::vector<KeyStepMember> members;
  std::string label;  // representative member sentence
};

struct ClusterConfig {
  double sim_threshold = 0.9;
  int min_clique_size = 6;  // "more than 5 sentences"
  double merge_sim_threshold = 0.75;
  double merge_overlap_threshold = 0.10;
};

/// Undirected similarity graph as sorted adjacency lists: edge (u,v) iff
/// cosine(u,v) >= threshold, no self-loops. All embeddings must share one
/// dimension.
std::vector<std::vector<int>> build_similarity_graph(
    const std::vector<EmbeddingVector>& embeddings, double threshold);

/// All maximal cliques (Bron-Kerbosch with pivoting). Each clique is sorted
/// ascending and the clique list is sorted lexicographically.
std::vector<std::vector<int>> enumerate_maximal_cliques(
    const std::vector<std::vector<int>>& adjacency);

/// Keeps cliques with at least min_clique_size vertices, then makes the
/// survivors disjoint: a vertex in several survivors stays only in the
/// largest one (ties to the lexicographically first clique).
std::vector<std::vector<int>> filter_cliques(
    const std::vector<std::vector<int>>& cliques, int min_clique_size);

/// How often the two clusters appear in the same summary step sequence:
/// |videos with a member of both| / min(|videos with a|, |videos with b|),
/// 0 when either cluster has no video support.
double sequence_overlap(const KeyStep& a, const KeyStep& b);

/// Greedily merges the most similar pair of clusters (mean pairwise cosine
/// across clusters) among pairs with similarity >= merge_sim_threshold and
/// sequence overlap <= merge_overlap_threshold, to a fixpoint. Final
/// clusters are re-indexed 1..m and labeled with the member closest to the
/// cluster's mean embedding.
std::vector<KeyStep> merge_clusters(std::vector<KeyStep> clusters,
                                    const ClusterConfig& config);

/// Full key step identification: embeds every summary step, builds the
/// similarity graph, enumerates and filters cliques, merges redundant
/// clusters. Throws NoKeyStepsError when nothing survives.
std::vector<KeyStep> identify_key_steps(
    const std::vector<SummaryStepSequence>& sequences,
    EmbeddingProvider& embedder, const ClusterConfig& config = {});

}  // namespace taskgraph

#endif  // TASKGRAPH_CLUSTER_HPP
