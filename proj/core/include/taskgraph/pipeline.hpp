#ifndef TASKGRAPH_PIPELINE_HPP
#define TASKGRAPH_PIPELINE_HPP

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "taskgraph/cluster.hpp"
#include "taskgraph/graph.hpp"
#include "taskgraph/graphinfer.hpp"
#include "taskgraph/providers.hpp"
#include "taskgraph/rank.hpp"
#include "taskgraph/remote.hpp"
#include "taskgraph/serialization.hpp"
#include "taskgraph/summarize.hpp"

namespace taskgraph {

enum class LabelSource { summary, asr };

struct PipelineConfig {
  ProviderConfig provider;
  SummarizeConfig summarize;
  ClusterConfig cluster;
  RankConfig rank;
  InferConfig infer;
  AccuracyMode accuracy_mode = AccuracyMode::automatic;
  std::uint64_t seed = 0;
  LabelSource label_source = LabelSource::summary;
};

/// Parses the configuration document (one section per stage, all fields
/// optional). Unknown keys are rejected to catch typos early.
PipelineConfig pipeline_config_from_json(const nlohmann::json& j);

/// The three model capabilities behind the pipeline. Fields are null when
/// the configuration does not supply the backing resource; stages check for
/// what they need.
struct ProviderSet {
  std::unique_ptr<CompletionProvider> completion;
  std::unique_ptr<EmbeddingProvider> embedding;
  std::unique_ptr<LikelihoodProvider> likelihood;
};

/// Builds providers from the configuration: fixture kind yields the
/// recorded-completion, trigram-embedding and bigram-likelihood providers;
/// remote yields HTTP providers sharing one endpoint and cache. A non-null
/// transport overrides the default HTTP client (used by tests).
ProviderSet make_providers(const ProviderConfig& config,
                           std::shared_ptr<HttpTransport> transport = nullptr);

struct PipelineOutputs {
  std::vector<SummaryRecord> summaries;
  std::vector<KeyStep> key_steps;
  std::vector<KeyStepSequence> sequences;  // labeled, non-empty
  std::vector<RankEntry> ranking;          // aligned with sequences
  TaskGraph graph;
  std::vector<std::string> warnings;
};

/// Summarizes every transcript, skipping ones whose completion parses to
/// zero steps (a warning is appended instead). Transcripts are processed
/// concurrently up to max_parallel; output order follows input order.
std::vector<SummaryRecord> summarize_all(const std::vector<Transcript>& transcripts,
                                         CompletionProvider& provider,
                                         const SummarizeConfig& config,
                                         int max_parallel,
                                         std::vector<std::string>& warnings);

/// Splits transcripts into sentences, the labeling source for ablations
/// that bypass summarization.
std::vector<SummaryStepSequence> asr_sequences(
    const std::vector<Transcript>& transcripts);

/// Labels every summary sequence and drops empty results with a warning.
std::vector<KeyStepSequence> label_all(
    const std::vector<SummaryStepSequence>& sequences,
    const std::vector<KeyStep>& key_steps, EmbeddingProvider& embedder,
    std::vector<std::string>& warnings);

/// Scores every sequence and marks the top ceil(keep_fraction * n) kept.
std::vector<RankEntry> rank_all(const std::vector<KeyStepSequence>& sequences,
                                const std::vector<KeyStep>& key_steps,
                                const std::string& task_name,
                                LikelihoodProvider& scorer,
                                const RankConfig& config, int max_parallel);

/// Runs summarize -> cluster -> label -> rank -> graph in memory.
PipelineOutputs run_pipeline(const std::vector<Transcript>& transcripts,
                             const PipelineConfig& config,
                             ProviderSet& providers);

}  // namespace taskgraph

#endif  // TASKGRAPH_PIPELINE_HPP
