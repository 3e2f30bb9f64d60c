#include "taskgraph/graphinfer.hpp"

#include <algorithm>

#include "doctest.h"
#include "taskgraph/errors.hpp"
#include "taskgraph/rng.hpp"
#include "taskgraph/simulate.hpp"

using namespace taskgraph;

namespace {

KeyStepSequence sequence_of(const std::vector<int>& ids) {
  KeyStepSequence h;
  h.video_id = "v";
  int position = 1;
  for (int id : ids) {
    h.items.push_back({id, "k" + std::to_string(id), position++});
  }
  return h;
}

EligibilityExample example(std::uint64_t bits, int m, int step, bool eligible,
                           double weight = 1.0) {
  return {{bits, m}, step, eligible, weight};
}

// Recursive tree walk used as an independent evaluator.
bool oracle_walk(const PreconditionFunction& f, std::size_t at,
                 std::uint64_t bits) {
  const TreeNode& node = f.nodes[at];
  if (node.leaf()) return node.predicted_label;
  const bool set = (bits >> (node.split_step - 1)) & 1u;
  return oracle_walk(f, set ? node.high : node.low, bits);
}

}  // namespace

TEST_CASE("to_examples: strict-past completions and weak negatives") {
  // h = (k2, k1, k3), m = 3: positives from each position's strict past
  const auto ex = to_examples(sequence_of({2, 1, 3}), 3, 0.3);
  std::vector<EligibilityExample> positives, negatives;
  for (const auto& e : ex) {
    (e.eligible ? positives : negatives).push_back(e);
  }
  REQUIRE(positives.size() == 3);
  CHECK(positives[0].completion.bits == 0b000);
  CHECK(positives[0].step == 2);
  CHECK(positives[0].weight == 1.0);
  CHECK(positives[1].completion.bits == 0b010);
  CHECK(positives[1].step == 1);
  CHECK(positives[2].completion.bits == 0b011);
  CHECK(positives[2].step == 3);

  // negatives: (c(1), k1), (c(1), k3), (c(2), k3)
  REQUIRE(negatives.size() == 3);
  CHECK(negatives[0].completion.bits == 0b000);
  CHECK(negatives[0].step == 1);
  CHECK(negatives[0].weight == 0.3);
  CHECK(negatives[1].completion.bits == 0b000);
  CHECK(negatives[1].step == 3);
  CHECK(negatives[2].completion.bits == 0b010);
  CHECK(negatives[2].step == 3);
}

TEST_CASE("to_examples: single step and the documented 2-step case") {
  const auto single = to_examples(sequence_of({1}), 1, 0.3);
  REQUIRE(single.size() == 1);
  CHECK(single[0].completion.bits == 0);
  CHECK(single[0].eligible);

  const auto pair = to_examples(sequence_of({1, 2}), 2, 0.5);
  REQUIRE(pair.size() == 3);
  CHECK(pair[0].completion.bits == 0b00);
  CHECK(pair[0].step == 1);
  CHECK(pair[0].eligible);
  CHECK(pair[1].completion.bits == 0b00);
  CHECK(pair[1].step == 2);
  CHECK_FALSE(pair[1].eligible);
  CHECK(pair[1].weight == 0.5);
  CHECK(pair[2].completion.bits == 0b01);
  CHECK(pair[2].step == 2);
  CHECK(pair[2].eligible);

  CHECK_THROWS_AS(to_examples(sequence_of({1, 1}), 2, 0.3), InvalidInputError);
  CHECK_THROWS_AS(to_examples(sequence_of({5}), 2, 0.3), InvalidInputError);
}

TEST_CASE("to_examples properties: positive count and monotone completions") {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 3 + static_cast<int>(rng.uniform_index(6));
    std::vector<int> ids(m);
    for (int p = 1; p <= m; ++p) ids[p - 1] = p;
    for (int i = m - 1; i > 0; --i) {
      std::swap(ids[i], ids[rng.uniform_index(i + 1)]);
    }
    const auto ex = to_examples(sequence_of(ids), m, 0.3);
    int positive_count = 0;
    std::uint64_t last_positive_bits = 0;
    for (const auto& e : ex) {
      if (!e.eligible) continue;
      ++positive_count;
      // strict-past completions grow monotonically along the sequence
      CHECK((e.completion.bits & last_positive_bits) == last_positive_bits);
      last_positive_bits = e.completion.bits;
    }
    CHECK(positive_count == m);
  }
}

TEST_CASE("fit_precondition_tree: one informative bit") {
  // step 2 eligible iff k1 complete
  std::vector<EligibilityExample> ex = {
      example(0b1, 2, 2, true),
      example(0b0, 2, 2, false, 0.3),
  };
  const auto f = fit_precondition_tree(ex, 2, 2);
  CHECK(f.evaluate(0b1));
  CHECK_FALSE(f.evaluate(0b0));
  // root splits on k1
  REQUIRE_FALSE(f.nodes.empty());
  CHECK(f.nodes[0].split_step == 1);
}

TEST_CASE("fit_precondition_tree: pure node stays a single leaf") {
  std::vector<EligibilityExample> ex = {
      example(0b01, 2, 2, true),
      example(0b01, 2, 2, true),
  };
  const auto f = fit_precondition_tree(ex, 2, 2);
  REQUIRE(f.nodes.size() == 1);
  CHECK(f.nodes[0].leaf());
  CHECK(f.nodes[0].predicted_label);
  CHECK(f.evaluate(0b00));
  CHECK(f.evaluate(0b11));
}

TEST_CASE("fit_precondition_tree learns AND, checked on the truth table") {
  // step 3 eligible iff k1 and k2 complete
  std::vector<EligibilityExample> ex = {
      example(0b011, 3, 3, true),
      example(0b000, 3, 3, false, 0.3),
      example(0b001, 3, 3, false, 0.3),
      example(0b010, 3, 3, false, 0.3),
  };
  const auto f = fit_precondition_tree(ex, 3, 3);
  for (std::uint64_t c = 0; c < 8; ++c) {
    const bool expected = (c & 0b011) == 0b011;
    CHECK(f.evaluate(c) == expected);
  }
}

TEST_CASE("fit_precondition_tree without positives is always ineligible") {
  std::vector<EligibilityExample> ex = {
      example(0b0, 1, 1, false, 0.3),
  };
  const auto f = fit_precondition_tree(ex, 1, 1);
  REQUIRE(f.nodes.size() == 1);
  CHECK_FALSE(f.nodes[0].predicted_label);
  CHECK_FALSE(f.evaluate(0b0));
  CHECK_FALSE(f.evaluate(0b1));
}

TEST_CASE("tree evaluation equals an independent recursive walk") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 4 + static_cast<int>(rng.uniform_index(4));
    // random weak-labels to grow a non-trivial tree
    std::vector<EligibilityExample> ex;
    for (int i = 0; i < 60; ++i) {
      const std::uint64_t bits = rng.next() & ((1u << m) - 1);
      ex.push_back(example(bits, m, 1, rng.bernoulli(0.5),
                           rng.bernoulli(0.5) ? 1.0 : 0.3));
    }
    const auto f = fit_precondition_tree(ex, 1, m);
    for (int probe = 0; probe < 50; ++probe) {
      const std::uint64_t bits = rng.next() & ((1u << m) - 1);
      CHECK(f.evaluate(bits) == oracle_walk(f, 0, bits));
    }
  }
}

TEST_CASE("eligibility evaluates every step against the completion") {
  const auto graph = consolidate_graph({}, {"a", "b", "c"});
  const auto e = eligibility(graph, {0b000, 3});
  CHECK(e == std::vector<bool>{true, true, true});
  CHECK_THROWS_AS(eligibility(graph, {0, 2}), InvalidInputError);

  // "give breaths" (3) requires both "check breathing" (1) and
  // "open airway" (2)
  const auto cpr = consolidate_graph(
      {normalize_dnf(3, {{1, 2}})}, {"check breathing", "open airway",
                                     "give breaths"});
  CHECK(eligibility(cpr, {0b011, 3}) == std::vector<bool>{true, true, true});
  CHECK(eligibility(cpr, {0b001, 3}) == std::vector<bool>{true, true, false});
  CHECK(eligibility(cpr, {0b000, 3}) == std::vector<bool>{true, true, false});
}

TEST_CASE("tree_to_dnf extracts positive-literal AND terms") {
  // eligible iff c[k1] = 1
  std::vector<EligibilityExample> ex = {
      example(0b1, 2, 2, true),
      example(0b0, 2, 2, false, 0.3),
  };
  auto dnf = tree_to_dnf(fit_precondition_tree(ex, 2, 2));
  CHECK(dnf.terms == std::vector<std::vector<int>>{{1}});
  CHECK_FALSE(dnf.always_true);

  // OR of AND(k1,k2) and k3, constructed by hand
  PreconditionFunction f;
  f.step = 4;
  f.nodes = {
      {3, 1, 2, 0, 0, false},  // root: test k3
      {1, 3, 4, 0, 0, false},  // k3=0: test k1
      {0, -1, -1, 5, 0.0, true},   // k3=1: eligible
      {0, -1, -1, 0, 1.0, false},  // k1=0: ineligible
      {2, 5, 6, 0, 0, false},      // k1=1: test k2
      {0, -1, -1, 0, 1.0, false},  // k2=0: ineligible
      {0, -1, -1, 2, 0.0, true},   // k2=1: eligible
  };
  dnf = tree_to_dnf(f);
  CHECK(dnf.terms == std::vector<std::vector<int>>{{1, 2}, {3}});

  // absorption: {k1} absorbs {k1, k2}
  CHECK(normalize_dnf(1, {{1}, {1, 2}}).terms ==
        std::vector<std::vector<int>>{{1}});
  // a negative-only eligible path exports an empty term -> always true
  PreconditionFunction g;
  g.step = 1;
  g.nodes = {
      {2, 1, 2, 0, 0, false},
      {0, -1, -1, 1, 0.0, true},   // k2=0: eligible, no positive literal
      {0, -1, -1, 0, 1.0, false},
  };
  dnf = tree_to_dnf(g);
  CHECK(dnf.always_true);
  CHECK(dnf.terms.empty());
}

TEST_CASE("consolidate_graph builds AND/OR structure with elision") {
  // give breaths: OR(AND(check breathing, open airway)) -> the single-term
  // OR is elided, the two-literal AND is materialized
  const auto cpr = consolidate_graph(
      {normalize_dnf(3, {{1, 2}})},
      {"check breathing", "open airway", "give breaths"});
  REQUIRE(cpr.nodes.size() == 4);
  CHECK(cpr.nodes[3].kind == NodeKind::and_node);
  const int and_id = cpr.nodes[3].id;
  auto has_edge = [&](int s, int d) {
    return std::find(cpr.edges.begin(), cpr.edges.end(),
                     std::make_pair(s, d)) != cpr.edges.end();
  };
  CHECK(has_edge(1, and_id));
  CHECK(has_edge(2, and_id));
  CHECK(has_edge(and_id, 3));
  CHECK(cpr.edges.size() == 3);

  // all preconditions trivial: m isolated nodes
  const auto isolated = consolidate_graph({}, {"a", "b", "c", "d"});
  CHECK(isolated.nodes.size() == 4);
  CHECK(isolated.edges.empty());

  // chain: single-literal terms need no AND/OR nodes
  const auto chain = consolidate_graph(
      {normalize_dnf(2, {{1}}), normalize_dnf(3, {{2}})}, {"a", "b", "c"});
  CHECK(chain.nodes.size() == 3);
  CHECK(chain.edges ==
        std::vector<std::pair<int, int>>{{1, 2}, {2, 3}});

  // a two-term OR materializes an OR node
  const auto withor = consolidate_graph({normalize_dnf(3, {{1}, {2}})},
                                        {"a", "b", "c"});
  REQUIRE(withor.nodes.size() == 4);
  CHECK(withor.nodes[3].kind == NodeKind::or_node);

  // single-argument AND/OR nodes never appear
  for (const auto* g : {&cpr, &isolated, &chain, &withor}) {
    for (const auto& node : g->nodes) {
      if (node.kind == NodeKind::step) continue;
      int parents = 0;
      for (const auto& [src, dst] : g->edges) {
        if (dst == node.id) ++parents;
      }
      CHECK(parents >= 2);
    }
  }
}

TEST_CASE("consolidate_graph rejects cyclic dependencies") {
  try {
    consolidate_graph({normalize_dnf(1, {{2}}), normalize_dnf(2, {{1}})},
                      {"a", "b"});
    FAIL("expected CyclicGraphError");
  } catch (const CyclicGraphError& e) {
    CHECK(e.cycle().size() == 2);
    CHECK(std::string(e.what()).find("cyclic") != std::string::npos);
  }
}

TEST_CASE("infer_graph recovers a chain from rollouts") {
  const auto truth = chain_graph(5);
  RolloutConfig rc;
  rc.count = 60;
  rc.seed = 7;
  const auto data = generate_dataset(truth, rc);
  const auto inferred = infer_graph(data, 5, InferConfig{});
  CHECK(inferred.edges == truth.edges);
  for (int p = 0; p < 5; ++p) {
    CHECK(inferred.preconditions[p].terms == truth.preconditions[p].terms);
    CHECK(inferred.preconditions[p].always_true ==
          truth.preconditions[p].always_true);
  }
  CHECK(eval_accuracy(inferred, truth, AccuracyMode::exact) == 1.0);
}

TEST_CASE("infer_graph on a single two-step sequence") {
  const auto g = infer_graph({sequence_of({1, 2})}, 2, InferConfig{});
  // k1 is precondition-free; k2's learned function respects "k1 before k2"
  CHECK(g.preconditions[0].trivial());
  CHECK(g.step_eligible(1, 0b00));
  CHECK(g.step_eligible(2, 0b01));
  CHECK_FALSE(g.step_eligible(2, 0b00));
}

TEST_CASE("a step that always goes first stays precondition-free") {
  std::vector<KeyStepSequence> data = {
      sequence_of({3, 1, 2}),
      sequence_of({3, 2, 1}),
  };
  const auto g = infer_graph(data, 3, InferConfig{});
  CHECK(g.preconditions[2].trivial());
  CHECK(g.step_eligible(3, 0b000));
}

TEST_CASE("inference dominates the always-eligible baseline") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RandomGraphConfig gc;
    gc.m = 5 + static_cast<int>(seed % 3);
    gc.density = 0.4;
    gc.seed = seed;
    const auto truth = random_graph(gc);
    RolloutConfig rc;
    rc.count = 60;
    rc.seed = seed * 31;
    const auto inferred =
        infer_graph(generate_dataset(truth, rc), gc.m, InferConfig{});
    std::vector<std::string> labels;
    for (int p = 1; p <= gc.m; ++p) labels.push_back("k" + std::to_string(p));
    const auto baseline = consolidate_graph({}, labels);
    CHECK(eval_accuracy(inferred, truth, AccuracyMode::exact) >=
          eval_accuracy(baseline, truth, AccuracyMode::exact));
  }
}

TEST_CASE("eval_accuracy identity, worked example and symmetry") {
  const auto truth = consolidate_graph({normalize_dnf(2, {{1}})}, {"a", "b"});
  CHECK(eval_accuracy(truth, truth, AccuracyMode::exact) == 1.0);

  // always-eligible prediction vs "k2 requires k1": step 1 agrees on all
  // four completions, step 2 agrees only on the two with c[k1]=1
  const auto always = consolidate_graph({}, {"a", "b"});
  CHECK(eval_accuracy(always, truth, AccuracyMode::exact) == 0.75);
  CHECK(eval_accuracy(truth, always, AccuracyMode::exact) == 0.75);

  const auto three = consolidate_graph({}, {"a", "b", "c"});
  CHECK_THROWS_AS(eval_accuracy(always, three, AccuracyMode::exact),
                  InvalidInputError);

  // sampled mode is deterministic per seed and symmetric
  const double s1 = eval_accuracy(always, truth, AccuracyMode::sampled, 42);
  const double s2 = eval_accuracy(always, truth, AccuracyMode::sampled, 42);
  const double s3 = eval_accuracy(truth, always, AccuracyMode::sampled, 42);
  CHECK(s1 == s2);
  CHECK(s1 == s3);
  CHECK(s1 == doctest::Approx(0.75).epsilon(0.02));
}
