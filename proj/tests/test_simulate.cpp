#include "taskgraph/simulate.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "taskgraph/errors.hpp"
#include "taskgraph/serialization.hpp"

using namespace taskgraph;

namespace {

std::vector<int> ids_of(const KeyStepSequence& h) {
  std::vector<int> ids;
  for (const auto& item : h.items) ids.push_back(item.key_step_id);
  return ids;
}

}  // namespace

TEST_CASE("chain rollouts always follow the single linear extension") {
  const auto chain = chain_graph(3);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CHECK(ids_of(rollout(chain, seed)) == std::vector<int>{1, 2, 3});
  }
}

TEST_CASE("an AND precondition forces its step last") {
  const auto graph = consolidate_graph({normalize_dnf(3, {{1, 2}})},
                                       {"k1", "k2", "k3"});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto ids = ids_of(rollout(graph, seed));
    REQUIRE(ids.size() == 3);
    CHECK(ids[2] == 3);
  }
}

TEST_CASE("two independent steps appear in both orders at fair rates") {
  const auto graph = consolidate_graph({}, {"k1", "k2"});
  int first_is_k1 = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto ids = ids_of(rollout(graph, seed));
    REQUIRE(ids.size() == 2);
    if (ids[0] == 1) ++first_is_k1;
  }
  CHECK(first_is_k1 >= 40);
  CHECK(first_is_k1 <= 60);
}

TEST_CASE("rollout reports unsatisfiable graphs") {
  TaskGraph graph = consolidate_graph({}, {"k1", "k2"});
  graph.preconditions[0] = {1, false, {}};  // never eligible
  graph.preconditions[1] = {2, false, {}};
  CHECK_THROWS_AS(rollout(graph, 0), InvalidGraphError);
}

TEST_CASE("rollout with drop_prob omits steps but still completes") {
  const auto chain = chain_graph(6);
  bool saw_shorter = false;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto h = rollout(chain, seed, 0.3);
    CHECK(h.items.size() <= 6);
    if (h.items.size() < 6) saw_shorter = true;
    // positions stay strictly increasing after omissions
    for (std::size_t i = 1; i < h.items.size(); ++i) {
      CHECK(h.items[i].source_position > h.items[i - 1].source_position);
    }
  }
  CHECK(saw_shorter);
}

TEST_CASE("generate_dataset is deterministic and sized") {
  const auto chain = chain_graph(4);
  RolloutConfig config;
  config.count = 60;
  config.seed = 5;
  const auto a = generate_dataset(chain, config);
  const auto b = generate_dataset(chain, config);
  REQUIRE(a.size() == 60);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(ids_of(a[i]) == ids_of(b[i]));
    CHECK(ids_of(a[i]) == std::vector<int>{1, 2, 3, 4});  // chain: identical
  }
  config.count = 0;
  CHECK_THROWS_AS(generate_dataset(chain, config), InvalidInputError);
}

TEST_CASE("every rollout prefix satisfies the ground-truth preconditions") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RandomGraphConfig gc;
    gc.m = 6;
    gc.density = 0.5;
    gc.seed = seed;
    const auto graph = random_graph(gc);
    for (std::uint64_t r = 0; r < 20; ++r) {
      const auto h = rollout(graph, seed * 100 + r);
      std::uint64_t completed = 0;
      std::set<int> seen;
      for (const auto& item : h.items) {
        CHECK(graph.preconditions[item.key_step_id - 1].satisfied(completed));
        CHECK(seen.insert(item.key_step_id).second);  // each step once
        completed |= std::uint64_t{1} << (item.key_step_id - 1);
      }
      CHECK(h.items.size() == 6);
    }
  }
}

TEST_CASE("random_graph density extremes") {
  RandomGraphConfig zero;
  zero.m = 5;
  zero.density = 0.0;
  zero.or_prob = 0.0;
  const auto free_graph = random_graph(zero);
  for (int p = 1; p <= 5; ++p) {
    CHECK(free_graph.preconditions[p - 1].trivial());
  }
  CHECK(free_graph.edges.empty());

  RandomGraphConfig one;
  one.m = 5;
  one.density = 1.0;
  one.or_prob = 0.0;
  const auto chain_like = random_graph(one);
  // full density with redundant requirements reduced: each step requires
  // exactly its predecessor in the sampled order, a strict chain
  int with_single_parent = 0;
  for (int p = 1; p <= 5; ++p) {
    const auto& dnf = chain_like.preconditions[p - 1];
    if (dnf.trivial()) continue;
    REQUIRE(dnf.terms.size() == 1);
    CHECK(dnf.terms[0].size() == 1);
    ++with_single_parent;
  }
  CHECK(with_single_parent == 4);
  const auto h = rollout(chain_like, 0);
  CHECK(h.items.size() == 5);
  // the only valid execution is the sampled order itself
  for (std::uint64_t seed = 1; seed < 5; ++seed) {
    CHECK(ids_of(rollout(chain_like, seed)) == ids_of(h));
  }
}

TEST_CASE("random_graph regenerates the committed golden graph") {
  RandomGraphConfig gc;
  gc.m = 6;
  gc.density = 0.4;
  gc.seed = 7;
  const auto graph = random_graph(gc);
  const auto again = random_graph(gc);
  CHECK(graph_to_json(graph) == graph_to_json(again));

  const auto golden_path = std::filesystem::path(TASKGRAPH_ROOT) / "tests" /
                           "data" / "golden" / "random_graph_m6_d04_s7.json";
  REQUIRE(std::filesystem::exists(golden_path));
  CHECK(canonical_dump(graph_to_json(graph)) ==
        canonical_dump(load_json_file(golden_path)));
}
