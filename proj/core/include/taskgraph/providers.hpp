#ifndef TASKGRAPH_PROVIDERS_HPP
#define TASKGRAPH_PROVIDERS_HPP

#include <filesystem>
#include <string>

#include "taskgraph/embedding.hpp"

namespace taskgraph {

/// Text prompt sent to a model. Non-empty by construction.
class Prompt {
 public:
  explicit Prompt(std::string text);
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

enum class ProviderKind { remote, fixture };

struct ProviderConfig {
  ProviderKind kind = ProviderKind::fixture;
  std::string endpoint;     // remote only, e.g. "http://host:8080/v1/infer"
  std::string api_key_env;  // env var holding the bearer token, may be empty
  std::filesystem::path cache_dir;  // empty disables the response cache
  int max_parallel = 4;
  int retry_limit = 2;
  std::string model = "default";
  int max_tokens = 512;

  // fixture inputs
  std::filesystem::path fixture_completions;  // JSON map prompt-hash -> text
  std::filesystem::path lm_corpus;            // bigram scorer training text

  void validate() const;  // throws InvalidInputError
};

/// Text completion ("let the model generate a completion").
class CompletionProvider {
 public:
  virtual ~CompletionProvider() = default;
  virtual std::string complete(const Prompt& prompt) = 0;
};

/// Sentence embedding. Implementations return unit-norm vectors of one
/// fixed dimension and are deterministic.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual EmbeddingVector embed(const std::string& sentence) = 0;
};

/// log p(continuation | prompt); finite and <= 0 for normalized models.
class LikelihoodProvider {
 public:
  virtual ~LikelihoodProvider() = default;
  virtual double score_loglik(const Prompt& prompt,
                              const std::string& continuation) = 0;
};

}  // namespace taskgraph

#endif  // TASKGRAPH_PROVIDERS_HPP
