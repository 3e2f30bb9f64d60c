#ifndef TASKGRAPH_SERIALIZATION_HPP
#define TASKGRAPH_SERIALIZATION_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "taskgraph/cluster.hpp"
#include "taskgraph/graph.hpp"
#include "taskgraph/providers.hpp"
#include "taskgraph/sequence.hpp"
#include "taskgraph/summarize.hpp"

namespace taskgraph {

/// Per-video ranking outcome as persisted by the rank stage.
struct RankEntry {
  std::string video_id;
  double score = 0.0;
  bool kept = false;
};

/// nlohmann::json objects iterate in key order, so dumping is canonical by
/// construction; this adds the fixed indentation and trailing newline the
/// golden files assume.
std::string canonical_dump(const nlohmann::json& value);

nlohmann::json load_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

std::vector<Transcript> transcripts_from_json(const nlohmann::json& j);
nlohmann::json transcripts_to_json(const std::vector<Transcript>& transcripts);

nlohmann::json summaries_to_json(const std::vector<SummaryRecord>& summaries);
std::vector<SummaryRecord> summaries_from_json(const nlohmann::json& j);

nlohmann::json clusters_to_json(const std::vector<KeyStep>& key_steps);
/// Cluster files carry no embeddings; members are re-embedded on load.
std::vector<KeyStep> clusters_from_json(const nlohmann::json& j,
                                        EmbeddingProvider& embedder);
/// Ids and labels only (members left empty); enough for rendering and
/// graph inference, which never touch embeddings.
std::vector<KeyStep> cluster_labels_from_json(const nlohmann::json& j);

nlohmann::json sequences_to_json(const std::vector<KeyStepSequence>& sequences);
std::vector<KeyStepSequence> sequences_from_json(const nlohmann::json& j);

nlohmann::json rank_to_json(const std::vector<RankEntry>& entries);
std::vector<RankEntry> rank_from_json(const nlohmann::json& j);

/// Graph schema: {"m", "nodes": [{"id","kind","label"}], "edges": [[src,dst]],
/// "preconditions": {"<step>": [[literals]] | [] | null}}. An empty term
/// list means always eligible; null means never eligible. Edges and nodes
/// are written sorted.
nlohmann::json graph_to_json(const TaskGraph& graph);
TaskGraph graph_from_json(const nlohmann::json& j);

}  // namespace taskgraph

#endif  // TASKGRAPH_SERIALIZATION_HPP
