#include "taskgraph/remote.hpp"

#include <cstdlib>

#include "httplib.h"
#include "json.hpp"
#include "taskgraph/errors.hpp"

namespace taskgraph {

namespace {

using nlohmann::json;

class HttplibTransport : public HttpTransport {
 public:
  Response post(const std::string& url, const Headers& headers,
                const std::string& body) override {
    const auto split = split_url(url);
    httplib::Client client(split.first);
    client.set_connection_timeout(10);
    client.set_read_timeout(60);
    httplib::Headers hdrs(headers.begin(), headers.end());
    auto result = client.Post(split.second, hdrs, body, "application/json");
    if (!result) {
      throw TransportError("POST " + url + " failed: " +
                           httplib::to_string(result.error()));
    }
    return {result->status, result->body};
  }

 private:
  // "http://host:port/path" -> ("http://host:port", "/path")
  static std::pair<std::string, std::string> split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
      throw InvalidInputError("endpoint must include a scheme: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
  }
};

json parse_response(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed provider response: ") +
                         e.what());
  }
}

}  // namespace

std::shared_ptr<HttpTransport> make_httplib_transport() {
  return std::make_shared<HttplibTransport>();
}

RemoteProviderBase::RemoteProviderBase(ProviderConfig config,
                                       std::shared_ptr<HttpTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
  config_.validate();
  if (config_.endpoint.empty()) {
    throw InvalidInputError("remote provider requires an endpoint");
  }
  if (!transport_) transport_ = make_httplib_transport();
  if (!config_.cache_dir.empty()) cache_.emplace(config_.cache_dir);
}

std::string RemoteProviderBase::fetch(const std::string& cache_key_material,
                                      const std::string& wire_body) {
  const std::string key = sha256_hex(cache_key_material);
  if (cache_) {
    if (auto hit = cache_->lookup(key)) return *hit;
  }

  HttpTransport::Headers headers;
  if (!config_.api_key_env.empty()) {
    if (const char* token = std::getenv(config_.api_key_env.c_str())) {
      headers.emplace_back("Authorization", std::string("Bearer ") + token);
    }
  }

  std::string last_error;
  for (int attempt = 0; attempt <= config_.retry_limit; ++attempt) {
    try {
      const auto response =
          transport_->post(config_.endpoint, headers, wire_body);
      if (response.status < 200 || response.status >= 300) {
        last_error = "HTTP " + std::to_string(response.status);
        continue;
      }
      if (cache_) cache_->store(key, response.body);
      return response.body;
    } catch (const TransportError& e) {
      last_error = e.what();
    }
  }
  throw TransportError("request failed after " +
                       std::to_string(config_.retry_limit + 1) +
                       " attempt(s): " + last_error);
}

RemoteCompletionProvider::RemoteCompletionProvider(
    ProviderConfig config, std::shared_ptr<HttpTransport> transport)
    : RemoteProviderBase(std::move(config), std::move(transport)) {}

std::string RemoteCompletionProvider::complete(const Prompt& prompt) {
  const json wire = {{"prompt", prompt.text()},
                     {"max_tokens", config().max_tokens},
                     {"temperature", 0}};
  const json key = {{"op", "complete"},
                    {"model", config().model},
                    {"prompt", prompt.text()}};
  const json response = parse_response(fetch(key.dump(), wire.dump()));
  if (!response.contains("completion") || !response["completion"].is_string()) {
    throw TransportError("completion response lacks a 'completion' string");
  }
  return response["completion"].get<std::string>();
}

RemoteEmbeddingProvider::RemoteEmbeddingProvider(
    ProviderConfig config, std::shared_ptr<HttpTransport> transport)
    : RemoteProviderBase(std::move(config), std::move(transport)) {}

EmbeddingVector RemoteEmbeddingProvider::embed(const std::string& sentence) {
  if (sentence.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw InvalidInputError("cannot embed an empty sentence");
  }
  const json wire = {{"sentence", sentence}};
  const json key = {{"op", "embed"},
                    {"model", config().model},
                    {"sentence", sentence}};
  const json response = parse_response(fetch(key.dump(), wire.dump()));
  if (!response.contains("embedding") || !response["embedding"].is_array()) {
    throw TransportError("embedding response lacks an 'embedding' array");
  }
  return EmbeddingVector::normalized(
      response["embedding"].get<std::vector<double>>());
}

RemoteLikelihoodProvider::RemoteLikelihoodProvider(
    ProviderConfig config, std::shared_ptr<HttpTransport> transport)
    : RemoteProviderBase(std::move(config), std::move(transport)) {}

double RemoteLikelihoodProvider::score_loglik(const Prompt& prompt,
                                              const std::string& continuation) {
  if (continuation.empty()) {
    throw InvalidInputError("continuation must not be empty");
  }
  const json wire = {{"prompt", prompt.text()}, {"continuation", continuation}};
  const json key = {{"op", "score"},
                    {"model", config().model},
                    {"prompt", prompt.text()},
                    {"continuation", continuation}};
  const json response = parse_response(fetch(key.dump(), wire.dump()));
  if (!response.contains("log_likelihood") ||
      !response["log_likelihood"].is_number()) {
    throw TransportError("likelihood response lacks a 'log_likelihood' number");
  }
  return response["log_likelihood"].get<double>();
}

}  // namespace taskgraph
