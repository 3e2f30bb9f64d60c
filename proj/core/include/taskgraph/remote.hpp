#ifndef TASKGRAPH_REMOTE_HPP
#define TASKGRAPH_REMOTE_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "taskgraph/cache.hpp"
#include "taskgraph/providers.hpp"

namespace taskgraph {

/// Minimal HTTP seam so tests can count or script calls without a network.
class HttpTransport {
 public:
  struct Response {
    int status = 0;
    std::string body;
  };
  using Headers = std::vector<std::pair<std::string, std::string>>;

  virtual ~HttpTransport() = default;

  /// POSTs a JSON body. Throws TransportError on connection failure.
  virtual Response post(const std::string& url, const Headers& headers,
                        const std::string& body) = 0;
};

/// cpp-httplib backed transport.
std::shared_ptr<HttpTransport> make_httplib_transport();

/// Shared machinery for the remote providers: canonical cache keys, bearer
/// auth, bounded retries, and raw-response caching.
class RemoteProviderBase {
 public:
  RemoteProviderBase(ProviderConfig config,
                     std::shared_ptr<HttpTransport> transport);

 protected:
  /// Returns the raw response body for a request, consulting the cache
  /// first. cache_key_material is hashed with SHA-256 to form the cache
  /// file name.
  std::string fetch(const std::string& cache_key_material,
                    const std::string& wire_body);

  const ProviderConfig& config() const { return config_; }

 private:
  ProviderConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  std::optional<ResponseCache> cache_;
};

/// POST {prompt, max_tokens, temperature: 0}; expects {"completion": "..."}.
/// Responses are cached keyed by the hash of (prompt, model id).
class RemoteCompletionProvider : public CompletionProvider,
                                 private RemoteProviderBase {
 public:
  RemoteCompletionProvider(ProviderConfig config,
                           std::shared_ptr<HttpTransport> transport = nullptr);
  std::string complete(const Prompt& prompt) override;
};

/// POST {sentence}; expects {"embedding": [...]}; the vector is normalized.
class RemoteEmbeddingProvider : public EmbeddingProvider,
                                private RemoteProviderBase {
 public:
  RemoteEmbeddingProvider(ProviderConfig config,
                          std::shared_ptr<HttpTransport> transport = nullptr);
  EmbeddingVector embed(const std::string& sentence) override;
};

/// POST {prompt, continuation}; expects {"log_likelihood": x}.
class RemoteLikelihoodProvider : public LikelihoodProvider,
                                 private RemoteProviderBase {
 public:
  RemoteLikelihoodProvider(ProviderConfig config,
                           std::shared_ptr<HttpTransport> transport = nullptr);
  double score_loglik(const Prompt& prompt,
                      const std::string& continuation) override;
};

}  // namespace taskgraph

#endif  // TASKGRAPH_REMOTE_HPP
