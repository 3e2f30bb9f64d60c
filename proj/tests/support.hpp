#ifndef TASKGRAPH_TESTS_SUPPORT_HPP
#define TASKGRAPH_TESTS_SUPPORT_HPP

#include <atomic>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "taskgraph/cache.hpp"
#include "taskgraph/embedding.hpp"
#include "taskgraph/errors.hpp"
#include "taskgraph/remote.hpp"
#include "taskgraph/rng.hpp"

namespace taskgraph::testing {

/// Serves scripted completions/embeddings/likelihoods and counts POSTs.
class MockTransport : public HttpTransport {
 public:
  std::atomic<int> calls{0};
  std::map<std::string, std::string> completions_by_prompt;
  double likelihood = -1.5;
  bool fail_always = false;

  Response post(const std::string&, const Headers&,
                const std::string& body) override {
    ++calls;
    if (fail_always) throw TransportError("scripted failure");
    const auto request = nlohmann::json::parse(body);
    nlohmann::json reply;
    if (request.contains("sentence")) {
      // arbitrary deterministic 4d embedding from the sentence hash
      const auto hash = sha256_hex(request["sentence"].get<std::string>());
      std::vector<double> v;
      for (int i = 0; i < 4; ++i) {
        v.push_back(1.0 + static_cast<double>(hash[i] % 7));
      }
      reply["embedding"] = v;
    } else if (request.contains("continuation")) {
      reply["log_likelihood"] = likelihood;
    } else {
      const auto prompt = request.at("prompt").get<std::string>();
      const auto it = completions_by_prompt.find(prompt);
      reply["completion"] =
          it == completions_by_prompt.end() ? "1. step one\n2. step two"
                                            : it->second;
    }
    return {200, reply.dump()};
  }
};

/// Random unit vector with non-negative entries, dimension dim.
inline EmbeddingVector random_unit_vector(Rng& rng, std::size_t dim) {
  std::vector<double> v(dim);
  for (auto& x : v) x = rng.uniform() + 1e-3;
  return EmbeddingVector::normalized(std::move(v));
}

/// Orthonormal basis vector e_i.
inline EmbeddingVector basis_vector(std::size_t dim, std::size_t i) {
  std::vector<double> v(dim, 0.0);
  v[i] = 1.0;
  return EmbeddingVector(std::move(v));
}

}  // namespace taskgraph::testing

#endif  // TASKGRAPH_TESTS_SUPPORT_HPP
