#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "taskgraph/cache.hpp"
#include "taskgraph/errors.hpp"
#include "taskgraph/fixtures.hpp"
#include "taskgraph/remote.hpp"
#include "taskgraph/rng.hpp"

using namespace taskgraph;
using taskgraph::testing::MockTransport;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "taskgraph-tests" /
                   (name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Independent re-implementation of the fixture embedding for the oracle
// check: lowercase, strip punctuation, collapse whitespace, char windows of
// three, FNV-1a into 256 buckets, L2-normalized counts.
std::vector<double> oracle_trigram_embedding(const std::string& sentence) {
  std::string text;
  bool pending = false;
  for (unsigned char ch : sentence) {
    if (std::isspace(ch)) {
      pending = !text.empty();
    } else if (!std::ispunct(ch)) {
      if (pending) text.push_back(' ');
      pending = false;
      text.push_back(static_cast<char>(std::tolower(ch)));
    }
  }
  std::vector<double> counts(256, 0.0);
  auto fnv = [](const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  };
  if (text.size() < 3) {
    counts[fnv(text) % 256] += 1.0;
  } else {
    for (std::size_t i = 0; i + 3 <= text.size(); ++i) {
      counts[fnv(text.substr(i, 3)) % 256] += 1.0;
    }
  }
  double norm = 0.0;
  for (double c : counts) norm += c * c;
  norm = std::sqrt(norm);
  for (double& c : counts) c /= norm;
  return counts;
}

// Independent bigram log-probability: add-one smoothing over the corpus
// vocabulary plus <s>, </s>, <unk>.
double oracle_bigram_score(const std::vector<std::vector<std::string>>& corpus,
                           const std::vector<std::string>& continuation) {
  std::set<std::string> vocab;
  std::map<std::pair<std::string, std::string>, int> bigrams;
  std::map<std::string, int> contexts;
  for (const auto& line : corpus) {
    std::string prev = "<s>";
    for (const auto& tok : line) {
      vocab.insert(tok);
      ++bigrams[{prev, tok}];
      ++contexts[prev];
      prev = tok;
    }
    ++bigrams[{prev, "</s>"}];
    ++contexts[prev];
  }
  const double v = static_cast<double>(vocab.size()) + 3.0;
  double lp = 0.0;
  std::string prev = "<s>";
  auto step = [&](const std::string& raw) {
    const std::string tok = vocab.count(raw) || raw == "</s>" ? raw : "<unk>";
    lp += std::log((bigrams[{prev, tok}] + 1.0) / (contexts[prev] + v));
    prev = tok;
  };
  for (const auto& tok : continuation) step(tok);
  step("</s>");
  return lp;
}

}  // namespace

TEST_CASE("fixture completions replay recorded text") {
  const Prompt p1("transcript one\nquery");
  const std::map<std::string, std::string> fixtures = {
      {FixtureCompletionProvider::prompt_hash(p1), "1. alpha\n2. beta"}};
  FixtureCompletionProvider provider(fixtures);
  CHECK(provider.complete(p1) == "1. alpha\n2. beta");
  CHECK(provider.complete(p1) == "1. alpha\n2. beta");

  const Prompt unknown("unknown prompt");
  CHECK_THROWS_AS(provider.complete(unknown), MissingFixtureError);
  try {
    provider.complete(unknown);
  } catch (const MissingFixtureError& e) {
    CHECK(e.prompt_hash() == FixtureCompletionProvider::prompt_hash(unknown));
    CHECK(std::string(e.what()).find(e.prompt_hash()) != std::string::npos);
  }
}

TEST_CASE("trigram embedder is deterministic and unit norm") {
  TrigramEmbeddingProvider embedder;
  const auto a = embedder.embed("fill water");
  const auto b = embedder.embed("fill water");
  CHECK(a.components() == b.components());
  CHECK(cosine(a, b) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(a.dimension() == TrigramEmbeddingProvider::kDimension);
  CHECK_THROWS_AS(embedder.embed("   "), InvalidInputError);
}

TEST_CASE("trigram embedder matches the brute-force trigram oracle") {
  TrigramEmbeddingProvider embedder;
  for (const char* sentence :
       {"fill water", "press brew", "Fill the pot, with water!", "ab"}) {
    const auto got = embedder.embed(sentence).components();
    const auto want = oracle_trigram_embedding(sentence);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == want[i]);
  }
  // cosine between two embeddings equals the oracle's value exactly
  const auto a = embedder.embed("fill water");
  const auto b = embedder.embed("press brew");
  const auto oa = oracle_trigram_embedding("fill water");
  const auto ob = oracle_trigram_embedding("press brew");
  double dot = 0.0;
  for (std::size_t i = 0; i < oa.size(); ++i) dot += oa[i] * ob[i];
  CHECK(cosine(a, b) == dot);
}

TEST_CASE("bigram scorer: corpus sentences outscore their shuffles") {
  const std::string corpus_text =
      "fill the pot with water\n"
      "add ground coffee to the basket\n"
      "place the pot on the stove\n"
      "pour the coffee into a cup\n";
  BigramLikelihoodProvider scorer(corpus_text);
  const Prompt prompt("list the steps");

  const std::vector<std::string> sentences = {
      "fill the pot with water", "place the pot on the stove",
      "pour the coffee into a cup"};
  std::vector<std::vector<std::string>> corpus_tokens;
  {
    std::istringstream lines(corpus_text);
    std::string line;
    while (std::getline(lines, line)) {
      if (!line.empty()) {
        corpus_tokens.push_back(BigramLikelihoodProvider::tokenize(line));
      }
    }
  }

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto& sentence = sentences[seed % sentences.size()];
    auto tokens = BigramLikelihoodProvider::tokenize(sentence);
    auto shuffled = tokens;
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
      std::swap(shuffled[i], shuffled[rng.uniform_index(i + 1)]);
    }
    std::string shuffled_text;
    for (const auto& tok : shuffled) {
      if (!shuffled_text.empty()) shuffled_text += ' ';
      shuffled_text += tok;
    }
    const double original = scorer.score_loglik(prompt, sentence);
    const double permuted = scorer.score_loglik(prompt, shuffled_text);
    CHECK(original >= permuted);
    // provider agrees with the independent bigram computation
    CHECK(original ==
          doctest::Approx(oracle_bigram_score(corpus_tokens, tokens))
              .epsilon(1e-12));
    CHECK(original <= 0.0);
    CHECK(std::isfinite(original));
  }
}

TEST_CASE("bigram scorer rejects empty continuations and is deterministic") {
  BigramLikelihoodProvider scorer("alpha beta gamma\n");
  const Prompt prompt("p");
  CHECK_THROWS_AS(scorer.score_loglik(prompt, "   "), InvalidInputError);
  CHECK(scorer.score_loglik(prompt, "alpha beta") ==
        scorer.score_loglik(prompt, "alpha beta"));
}

TEST_CASE("response cache round-trips bytes") {
  ResponseCache cache(temp_dir("cache"));
  const std::string payload = std::string("raw\0bytes\n\x01", 11);
  cache.store("k1", payload);
  auto hit = cache.lookup("k1");
  REQUIRE(hit.has_value());
  CHECK(*hit == payload);
  CHECK_FALSE(cache.lookup("missing").has_value());
  cache.store("k1", "second");
  CHECK(*cache.lookup("k1") == "second");
}

TEST_CASE("remote completion: cache warm replay issues zero network calls") {
  const auto cache_dir = temp_dir("remote-cache");
  auto transport = std::make_shared<MockTransport>();
  transport->completions_by_prompt["hello"] = "1. first\n2. second";

  ProviderConfig config;
  config.kind = ProviderKind::remote;
  config.endpoint = "http://model.test/v1/complete";
  config.cache_dir = cache_dir;

  RemoteCompletionProvider provider(config, transport);
  const Prompt prompt("hello");
  const std::string first = provider.complete(prompt);
  CHECK(first == "1. first\n2. second");
  CHECK(transport->calls == 1);
  CHECK(provider.complete(prompt) == first);
  CHECK(transport->calls == 1);

  // a fresh provider over the same cache directory also stays offline
  RemoteCompletionProvider reopened(config, transport);
  CHECK(reopened.complete(prompt) == first);
  CHECK(transport->calls == 1);
}

TEST_CASE("remote providers retry and then raise TransportError") {
  auto transport = std::make_shared<MockTransport>();
  transport->fail_always = true;

  ProviderConfig config;
  config.kind = ProviderKind::remote;
  config.endpoint = "http://model.test/v1";
  config.retry_limit = 2;

  RemoteCompletionProvider provider(config, transport);
  CHECK_THROWS_AS(provider.complete(Prompt("x")), TransportError);
  CHECK(transport->calls == 3);  // 1 attempt + 2 retries
}

TEST_CASE("remote embedding and likelihood parse their responses") {
  auto transport = std::make_shared<MockTransport>();
  transport->likelihood = -2.25;

  ProviderConfig config;
  config.kind = ProviderKind::remote;
  config.endpoint = "http://model.test/v1";

  RemoteEmbeddingProvider embedder(config, transport);
  const auto v = embedder.embed("some sentence");
  double norm = 0.0;
  for (double x : v.components()) norm += x * x;
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(embedder.embed("  "), InvalidInputError);

  RemoteLikelihoodProvider scorer(config, transport);
  CHECK(scorer.score_loglik(Prompt("p"), "continuation") == -2.25);
  CHECK_THROWS_AS(scorer.score_loglik(Prompt("p"), ""), InvalidInputError);
}

TEST_CASE("prompt must be non-empty") {
  CHECK_THROWS_AS(Prompt(""), InvalidInputError);
}
