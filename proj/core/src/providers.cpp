#include "taskgraph/providers.hpp"

#include "taskgraph/errors.hpp"

namespace taskgraph {

Prompt::Prompt(std::string text) : text_(std::move(text)) {
  if (text_.empty()) {
    throw InvalidInputError("prompt text must not be empty");
  }
}

void ProviderConfig::validate() const {
  if (kind == ProviderKind::remote && endpoint.empty()) {
    throw InvalidInputError("remote provider requires an endpoint");
  }
  if (max_parallel < 1) {
    throw InvalidInputError("max_parallel must be at least 1");
  }
  if (retry_limit < 0) {
    throw InvalidInputError("retry_limit must be non-negative");
  }
  if (max_tokens < 1) {
    throw InvalidInputError("max_tokens must be positive");
  }
}

}  // namespace taskgraph
