#include "taskgraph/serialization.hpp"

#include "doctest.h"
#include "taskgraph/errors.hpp"
#include "taskgraph/fixtures.hpp"
#include "taskgraph/simulate.hpp"

using namespace taskgraph;
using nlohmann::json;

TEST_CASE("graph json round trip is canonical") {
  const auto graph = consolidate_graph(
      {normalize_dnf(3, {{1, 2}}), normalize_dnf(4, {{3}, {1}})},
      {"a", "b", "c", "d"});
  const json j = graph_to_json(graph);
  const TaskGraph back = graph_from_json(j);
  CHECK(graph_to_json(back) == j);
  CHECK(canonical_dump(graph_to_json(back)) == canonical_dump(j));
  CHECK(back.m == 4);
  CHECK(back.nodes.size() == graph.nodes.size());
  CHECK(back.preconditions[2].terms == graph.preconditions[2].terms);
}

TEST_CASE("graph json distinguishes always and never eligible") {
  TaskGraph graph = consolidate_graph({}, {"a", "b"});
  graph.preconditions[1] = {2, false, {}};  // never eligible
  const json j = graph_to_json(graph);
  CHECK(j.at("preconditions").at("1") == json::array());
  CHECK(j.at("preconditions").at("2").is_null());
  const TaskGraph back = graph_from_json(j);
  CHECK(back.preconditions[0].always_true);
  CHECK(back.preconditions[1].never_eligible());
  CHECK(graph_to_json(back) == j);
}

TEST_CASE("graph json accepts minimal hand-written files") {
  const json j = {
      {"m", 3},
      {"preconditions", {{"3", json::array({json::array({1, 2})})}}},
  };
  const TaskGraph graph = graph_from_json(j);
  CHECK(graph.m == 3);
  CHECK(graph.preconditions[0].always_true);
  CHECK(graph.preconditions[2].terms == std::vector<std::vector<int>>{{1, 2}});
  CHECK(graph.nodes.size() == 4);  // one AND node synthesized

  CHECK_THROWS_AS(graph_from_json(json{{"m", 2}}), InvalidInputError);
  const json bad = {
      {"m", 2},
      {"preconditions", {{"1", json::array({json::array({9})})}}},
  };
  CHECK_THROWS_AS(graph_from_json(bad), InvalidInputError);
}

TEST_CASE("sequences round trip") {
  KeyStepSequence h;
  h.video_id = "v1";
  h.items = {{2, "do the second thing", 1}, {1, "do the first thing", 3}};
  const json j = sequences_to_json({h});
  const auto back = sequences_from_json(j);
  REQUIRE(back.size() == 1);
  CHECK(back[0].video_id == "v1");
  REQUIRE(back[0].items.size() == 2);
  CHECK(back[0].items[0].key_step_id == 2);
  CHECK(back[0].items[0].matched_sentence == "do the second thing");
  CHECK(back[0].items[1].source_position == 3);
  CHECK(sequences_to_json(back) == j);
}

TEST_CASE("clusters round trip re-embeds members") {
  TrigramEmbeddingProvider embedder;
  KeyStep k;
  k.id = 1;
  k.label = "fill the pot";
  k.members = {{"fill the pot", "v1", 1, embedder.embed("fill the pot")},
               {"fill the pot up", "v2", 2, embedder.embed("fill the pot up")}};
  const json j = clusters_to_json({k});
  const auto back = clusters_from_json(j, embedder);
  REQUIRE(back.size() == 1);
  CHECK(back[0].label == "fill the pot");
  REQUIRE(back[0].members.size() == 2);
  CHECK(back[0].members[1].video_id == "v2");
  CHECK(cosine(back[0].members[0].embedding, k.members[0].embedding) ==
        doctest::Approx(1.0));
  CHECK(clusters_to_json(back) == j);

  const auto labels_only = cluster_labels_from_json(j);
  REQUIRE(labels_only.size() == 1);
  CHECK(labels_only[0].id == 1);
  CHECK(labels_only[0].label == "fill the pot");
  CHECK(labels_only[0].members.empty());
}

TEST_CASE("summaries and rank entries round trip") {
  SummaryRecord record;
  record.sequence.video_id = "v9";
  record.sequence.steps = {"step one", "step two"};
  record.raw_completion = "1. step one\n2. step two";
  record.truncated = true;
  const json sj = summaries_to_json({record});
  const auto sback = summaries_from_json(sj);
  REQUIRE(sback.size() == 1);
  CHECK(sback[0].sequence.steps == record.sequence.steps);
  CHECK(sback[0].truncated);
  CHECK(summaries_to_json(sback) == sj);

  const json rj = rank_to_json({{"v1", -3.5, true}, {"v2", -4.0, false}});
  const auto rback = rank_from_json(rj);
  REQUIRE(rback.size() == 2);
  CHECK(rback[0].kept);
  CHECK(rback[1].score == -4.0);
  CHECK(rank_to_json(rback) == rj);
}

TEST_CASE("transcripts validate required fields and unique ids") {
  const json good = json::array(
      {{{"task", "t"}, {"video_id", "v1"}, {"text", "body"}}});
  const auto transcripts = transcripts_from_json(good);
  REQUIRE(transcripts.size() == 1);
  CHECK(transcripts[0].task_name == "t");
  CHECK(transcripts_to_json(transcripts) == good);

  const json dup = json::array(
      {{{"task", "t"}, {"video_id", "v1"}, {"text", "a"}},
       {{"task", "t"}, {"video_id", "v1"}, {"text", "b"}}});
  CHECK_THROWS_AS(transcripts_from_json(dup), InvalidInputError);
  const json empty_field = json::array(
      {{{"task", ""}, {"video_id", "v1"}, {"text", "a"}}});
  CHECK_THROWS_AS(transcripts_from_json(empty_field), InvalidInputError);
}

TEST_CASE("dot export renders boxes, diamonds and edges deterministically") {
  const auto cpr = consolidate_graph(
      {normalize_dnf(3, {{1, 2}})},
      {"check breathing", "open airway", "give breaths"});
  const std::string dot = export_dot(cpr);
  CHECK(dot.find("digraph taskgraph {") == 0);
  CHECK(dot.find("n1 [shape=box, label=\"check breathing\"]") !=
        std::string::npos);
  CHECK(dot.find("n4 [shape=diamond, label=\"AND\"") != std::string::npos);
  CHECK(dot.find("n1 -> n4;") != std::string::npos);
  CHECK(dot.find("n2 -> n4;") != std::string::npos);
  CHECK(dot.find("n4 -> n3;") != std::string::npos);
  CHECK(export_dot(cpr) == dot);

  // isolated nodes still render as labeled boxes
  const auto isolated = consolidate_graph({}, {"alpha", "beta"});
  const std::string iso = export_dot(isolated);
  CHECK(iso.find("n1 [shape=box, label=\"alpha\"]") != std::string::npos);
  CHECK(iso.find("->") == std::string::npos);

  // quotes in labels are escaped
  const auto quoted = consolidate_graph({}, {"say \"hi\""});
  CHECK(export_dot(quoted).find("label=\"say \\\"hi\\\"\"") !=
        std::string::npos);
}
