#include "taskgraph/fixtures.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "taskgraph/cache.hpp"
#include "taskgraph/errors.hpp"

namespace taskgraph {

FixtureCompletionProvider::FixtureCompletionProvider(
    const std::filesystem::path& fixture_file) {
  std::ifstream in(fixture_file);
  if (!in) {
    throw InvalidInputError("cannot open fixture file " +
                            fixture_file.string());
  }
  nlohmann::json parsed;
  try {
    in >> parsed;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError("malformed fixture file " + fixture_file.string() +
                            ": " + e.what());
  }
  if (!parsed.is_object()) {
    throw InvalidInputError("fixture file must hold a JSON object");
  }
  for (const auto& [hash, text] : parsed.items()) {
    completions_[hash] = text.get<std::string>();
  }
}

std::string FixtureCompletionProvider::prompt_hash(const Prompt& prompt) {
  return sha256_hex(prompt.text());
}

std::string FixtureCompletionProvider::complete(const Prompt& prompt) {
  const std::string hash = prompt_hash(prompt);
  const auto it = completions_.find(hash);
  if (it == completions_.end()) {
    throw MissingFixtureError("no recorded completion for prompt hash " + hash,
                              hash);
  }
  return it->second;
}

std::string TrigramEmbeddingProvider::normalize(const std::string& sentence) {
  std::string out;
  out.reserve(sentence.size());
  bool pending_space = false;
  for (unsigned char ch : sentence) {
    if (std::isspace(ch)) {
      pending_space = !out.empty();
      continue;
    }
    if (std::ispunct(ch)) continue;
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(ch)));
  }
  return out;
}

std::uint64_t TrigramEmbeddingProvider::fnv1a(std::string_view data) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char ch : data) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  return hash;
}

EmbeddingVector TrigramEmbeddingProvider::embed(const std::string& sentence) {
  const std::string text = normalize(sentence);
  if (text.empty()) {
    throw InvalidInputError("cannot embed an empty sentence");
  }
  std::vector<double> counts(kDimension, 0.0);
  if (text.size() < 3) {
    counts[fnv1a(text) % kDimension] += 1.0;
  } else {
    for (std::size_t i = 0; i + 3 <= text.size(); ++i) {
      counts[fnv1a(std::string_view(text).substr(i, 3)) % kDimension] += 1.0;
    }
  }
  return EmbeddingVector::normalized(std::move(counts));
}

std::vector<std::string> BigramLikelihoodProvider::tokenize(
    const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char ch : text) {
    if (std::isspace(ch)) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    } else {
      current.push_back(static_cast<char>(std::tolower(ch)));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

BigramLikelihoodProvider::BigramLikelihoodProvider(
    const std::string& corpus_text) {
  begin_id_ = 0;
  end_id_ = 1;
  unk_id_ = 2;
  int next_id = 3;

  std::istringstream lines(corpus_text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    int prev = begin_id_;
    for (const auto& token : tokens) {
      auto [it, inserted] = vocabulary_.try_emplace(token, next_id);
      if (inserted) ++next_id;
      ++bigram_counts_[{prev, it->second}];
      ++context_counts_[prev];
      prev = it->second;
    }
    ++bigram_counts_[{prev, end_id_}];
    ++context_counts_[prev];
  }
}

BigramLikelihoodProvider BigramLikelihoodProvider::from_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInputError("cannot open corpus file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return BigramLikelihoodProvider(buffer.str());
}

int BigramLikelihoodProvider::token_id(const std::string& token) const {
  const auto it = vocabulary_.find(token);
  return it == vocabulary_.end() ? unk_id_ : it->second;
}

double BigramLikelihoodProvider::score_loglik(const Prompt& /*prompt*/,
                                              const std::string& continuation) {
  const auto tokens = tokenize(continuation);
  if (tokens.empty()) {
    throw InvalidInputError("continuation has no tokens to score");
  }
  // vocabulary plus <s>, </s>, <unk>
  const double vocab = static_cast<double>(vocabulary_.size()) + 3.0;
  double log_prob = 0.0;
  int prev = begin_id_;
  auto transition = [&](int next) {
    const auto big = bigram_counts_.find({prev, next});
    const double numer = (big == bigram_counts_.end() ? 0 : big->second) + 1.0;
    const auto ctx = context_counts_.find(prev);
    const double denom =
        (ctx == context_counts_.end() ? 0 : ctx->second) + vocab;
    log_prob += std::log(numer / denom);
    prev = next;
  };
  for (const auto& token : tokens) transition(token_id(token));
  transition(end_id_);
  return log_prob;
}

}  // namespace taskgraph
