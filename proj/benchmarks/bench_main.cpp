#include <benchmark/benchmark.h>

#include "taskgraph/cluster.hpp"
#include "taskgraph/fixtures.hpp"
#include "taskgraph/graphinfer.hpp"
#include "taskgraph/label.hpp"
#include "taskgraph/rng.hpp"
#include "taskgraph/simulate.hpp"

namespace {

using namespace taskgraph;

std::vector<std::vector<int>> random_adjacency(int n, double p,
                                               std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<int>> adj(n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.bernoulli(p)) {
        adj[u].push_back(v);
        adj[v].push_back(u);
      }
    }
  }
  return adj;
}

void BM_MaximalCliques(benchmark::State& state) {
  const auto adj =
      random_adjacency(static_cast<int>(state.range(0)), 0.3, 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_maximal_cliques(adj));
  }
}
BENCHMARK(BM_MaximalCliques)->Arg(40)->Arg(80)->Arg(120);

void BM_TrigramEmbedding(benchmark::State& state) {
  TrigramEmbeddingProvider embedder;
  const std::string sentence =
      "remove the two screws on the bottom of the phone near the connector";
  for (auto _ : state) {
    benchmark::DoNotOptimize(embedder.embed(sentence));
  }
}
BENCHMARK(BM_TrigramEmbedding);

void BM_GreedyAlign(benchmark::State& state) {
  Rng rng(3);
  const std::size_t n = state.range(0);
  std::vector<std::vector<double>> c(n, std::vector<double>(n));
  for (auto& row : c) {
    for (auto& value : row) value = rng.uniform();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(greedy_align(c));
  }
}
BENCHMARK(BM_GreedyAlign)->Arg(10)->Arg(30);

void BM_InferGraph(benchmark::State& state) {
  RandomGraphConfig gc;
  gc.m = static_cast<int>(state.range(0));
  gc.density = 0.4;
  gc.seed = 11;
  const auto truth = random_graph(gc);
  RolloutConfig rc;
  rc.count = 60;
  const auto data = generate_dataset(truth, rc);
  for (auto _ : state) {
    benchmark::DoNotOptimize(infer_graph(data, gc.m, InferConfig{}));
  }
}
BENCHMARK(BM_InferGraph)->Arg(6)->Arg(8)->Arg(12);

void BM_EvalAccuracyExact(benchmark::State& state) {
  RandomGraphConfig gc;
  gc.m = static_cast<int>(state.range(0));
  gc.density = 0.4;
  gc.seed = 5;
  const auto a = random_graph(gc);
  gc.seed = 6;
  const auto b = random_graph(gc);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_accuracy(a, b, AccuracyMode::exact));
  }
}
BENCHMARK(BM_EvalAccuracyExact)->Arg(8)->Arg(12)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
