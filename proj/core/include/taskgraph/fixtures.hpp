#ifndef TASKGRAPH_FIXTURES_HPP
#define TASKGRAPH_FIXTURES_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "taskgraph/providers.hpp"

namespace taskgraph {

/// Replays recorded completions. The fixture file is a JSON object mapping
/// the SHA-256 hex of the prompt text to the completion text. Unknown
/// prompts raise MissingFixtureError naming the prompt hash.
class FixtureCompletionProvider : public CompletionProvider {
 public:
  explicit FixtureCompletionProvider(const std::filesystem::path& fixture_file);
  explicit FixtureCompletionProvider(std::map<std::string, std::string> by_hash)
      : completions_(std::move(by_hash)) {}

  static std::string prompt_hash(const Prompt& prompt);

  std::string complete(const Prompt& prompt) override;

 private:
  std::map<std::string, std::string> completions_;
};

/// Deterministic offline embedder: character trigrams (window 3 over the
/// lowercased, punctuation-stripped, whitespace-collapsed sentence) hashed
/// into 256 buckets with FNV-1a, counts L2-normalized. Small enough for
/// tests while preserving lexical similarity.
class TrigramEmbeddingProvider : public EmbeddingProvider {
 public:
  static constexpr std::size_t kDimension = 256;

  EmbeddingVector embed(const std::string& sentence) override;

  /// The preprocessed character stream trigrams are taken over.
  static std::string normalize(const std::string& sentence);
  static std::uint64_t fnv1a(std::string_view data);
};

/// Deterministic offline likelihood scorer: token bigrams with add-one
/// smoothing, fitted on a plain-text corpus (one sentence per line). Tokens
/// are lowercased whitespace-separated words; unknown tokens map to a
/// shared <unk>. Scores are log p(continuation) with <s>/</s> boundary
/// tokens and are always finite and <= 0.
class BigramLikelihoodProvider : public LikelihoodProvider {
 public:
  explicit BigramLikelihoodProvider(const std::string& corpus_text);
  static BigramLikelihoodProvider from_file(const std::filesystem::path& path);

  static std::vector<std::string> tokenize(const std::string& text);

  double score_loglik(const Prompt& prompt,
                      const std::string& continuation) override;

 private:
  int token_id(const std::string& token) const;

  std::map<std::string, int> vocabulary_;
  std::map<std::pair<int, int>, int> bigram_counts_;
  std::map<int, int> context_counts_;
  int begin_id_ = 0;
  int end_id_ = 0;
  int unk_id_ = 0;
};

}  // namespace taskgraph

#endif  // TASKGRAPH_FIXTURES_HPP
