#include "taskgraph/serialization.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "taskgraph/errors.hpp"

namespace taskgraph {

using nlohmann::json;

std::string canonical_dump(const json& value) { return value.dump(2) + "\n"; }

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInputError("cannot open " + path.string());
  }
  try {
    json parsed;
    in >> parsed;
    return parsed;
  } catch (const json::exception& e) {
    throw InvalidInputError("malformed JSON in " + path.string() + ": " +
                            e.what());
  }
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw InvalidInputError("cannot write " + path.string());
  }
  out << content;
}

std::vector<Transcript> transcripts_from_json(const json& j) {
  if (!j.is_array()) {
    throw InvalidInputError("transcripts file must hold a JSON array");
  }
  std::vector<Transcript> out;
  std::set<std::string> seen_ids;
  for (const auto& item : j) {
    Transcript t;
    t.task_name = item.at("task").get<std::string>();
    t.video_id = item.at("video_id").get<std::string>();
    t.text = item.at("text").get<std::string>();
    if (t.task_name.empty() || t.video_id.empty() || t.text.empty()) {
      throw InvalidInputError("transcript entries need task, video_id, text");
    }
    if (!seen_ids.insert(t.video_id).second) {
      throw InvalidInputError("duplicate video_id " + t.video_id);
    }
    out.push_back(std::move(t));
  }
  return out;
}

json transcripts_to_json(const std::vector<Transcript>& transcripts) {
  json out = json::array();
  for (const auto& t : transcripts) {
    out.push_back(
        {{"task", t.task_name}, {"video_id", t.video_id}, {"text", t.text}});
  }
  return out;
}

json summaries_to_json(const std::vector<SummaryRecord>& summaries) {
  json out = json::array();
  for (const auto& record : summaries) {
    out.push_back({{"video_id", record.sequence.video_id},
                   {"steps", record.sequence.steps},
                   {"raw_completion", record.raw_completion},
                   {"truncated", record.truncated}});
  }
  return out;
}

std::vector<SummaryRecord> summaries_from_json(const json& j) {
  if (!j.is_array()) {
    throw InvalidInputError("summaries file must hold a JSON array");
  }
  std::vector<SummaryRecord> out;
  for (const auto& item : j) {
    SummaryRecord record;
    record.sequence.video_id = item.at("video_id").get<std::string>();
    record.sequence.steps = item.at("steps").get<std::vector<std::string>>();
    record.raw_completion = item.value("raw_completion", std::string{});
    record.truncated = item.value("truncated", false);
    out.push_back(std::move(record));
  }
  return out;
}

json clusters_to_json(const std::vector<KeyStep>& key_steps) {
  json out = json::array();
  for (const auto& k : key_steps) {
    json members = json::array();
    for (const auto& member : k.members) {
      members.push_back({{"sentence", member.sentence},
                         {"video_id", member.video_id},
                         {"position", member.position}});
    }
    out.push_back({{"id", k.id}, {"label", k.label}, {"members", members}});
  }
  return out;
}

std::vector<KeyStep> clusters_from_json(const json& j,
                                        EmbeddingProvider& embedder) {
  if (!j.is_array()) {
    throw InvalidInputError("clusters file must hold a JSON array");
  }
  std::vector<KeyStep> out;
  for (const auto& item : j) {
    KeyStep k;
    k.id = item.at("id").get<int>();
    k.label = item.at("label").get<std::string>();
    for (const auto& member : item.at("members")) {
      const auto sentence = member.at("sentence").get<std::string>();
      k.members.push_back({sentence, member.at("video_id").get<std::string>(),
                           member.at("position").get<int>(),
                           embedder.embed(sentence)});
    }
    if (k.members.empty()) {
      throw InvalidInputError("cluster " + std::to_string(k.id) +
                              " has no members");
    }
    out.push_back(std::move(k));
  }
  return out;
}

std::vector<KeyStep> cluster_labels_from_json(const json& j) {
  if (!j.is_array()) {
    throw InvalidInputError("clusters file must hold a JSON array");
  }
  std::vector<KeyStep> out;
  for (const auto& item : j) {
    KeyStep k;
    k.id = item.at("id").get<int>();
    k.label = item.at("label").get<std::string>();
    out.push_back(std::move(k));
  }
  return out;
}

json sequences_to_json(const std::vector<KeyStepSequence>& sequences) {
  json out = json::array();
  for (const auto& h : sequences) {
    json items = json::array();
    for (const auto& item : h.items) {
      items.push_back({{"key_step_id", item.key_step_id},
                       {"matched_sentence", item.matched_sentence},
                       {"source_position", item.source_position}});
    }
    out.push_back({{"video_id", h.video_id}, {"items", items}});
  }
  return out;
}

std::vector<KeyStepSequence> sequences_from_json(const json& j) {
  if (!j.is_array()) {
    throw InvalidInputError("sequences file must hold a JSON array");
  }
  std::vector<KeyStepSequence> out;
  for (const auto& entry : j) {
    KeyStepSequence h;
    h.video_id = entry.at("video_id").get<std::string>();
    for (const auto& item : entry.at("items")) {
      h.items.push_back({item.at("key_step_id").get<int>(),
                         item.at("matched_sentence").get<std::string>(),
                         item.at("source_position").get<int>()});
    }
    out.push_back(std::move(h));
  }
  return out;
}

json rank_to_json(const std::vector<RankEntry>& entries) {
  json out = json::array();
  for (const auto& entry : entries) {
    out.push_back({{"video_id", entry.video_id},
                   {"score", entry.score},
                   {"kept", entry.kept}});
  }
  return out;
}

std::vector<RankEntry> rank_from_json(const json& j) {
  if (!j.is_array()) {
    throw InvalidInputError("rank file must hold a JSON array");
  }
  std::vector<RankEntry> out;
  for (const auto& item : j) {
    out.push_back({item.at("video_id").get<std::string>(),
                   item.at("score").get<double>(),
                   item.at("kept").get<bool>()});
  }
  return out;
}

json graph_to_json(const TaskGraph& graph) {
  json nodes = json::array();
  std::vector<GraphNode> sorted_nodes = graph.nodes;
  std::sort(sorted_nodes.begin(), sorted_nodes.end(),
            [](const GraphNode& a, const GraphNode& b) { return a.id < b.id; });
  for (const auto& node : sorted_nodes) {
    const char* kind = node.kind == NodeKind::step  ? "step"
                       : node.kind == NodeKind::and_node ? "and"
                                                         : "or";
    nodes.push_back({{"id", node.id}, {"kind", kind}, {"label", node.label}});
  }

  auto edges = graph.edges;
  std::sort(edges.begin(), edges.end());
  json edge_list = json::array();
  for (const auto& [src, dst] : edges) {
    edge_list.push_back(json::array({src, dst}));
  }

  json preconditions = json::object();
  for (const auto& dnf : graph.preconditions) {
    json value;
    if (dnf.never_eligible()) {
      value = nullptr;
    } else if (dnf.always_true) {
      value = json::array();
    } else {
      value = dnf.terms;
    }
    preconditions[std::to_string(dnf.step)] = std::move(value);
  }

  return {{"m", graph.m},
          {"nodes", nodes},
          {"edges", edge_list},
          {"preconditions", preconditions}};
}

TaskGraph graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("m") || !j.contains("preconditions")) {
    throw InvalidInputError("graph file needs 'm' and 'preconditions'");
  }
  const int m = j.at("m").get<int>();
  if (m < 0 || m > 64) {
    throw InvalidInputError("graph m must lie in 0..64");
  }

  std::vector<std::string> labels(m);
  for (int p = 1; p <= m; ++p) labels[p - 1] = "k" + std::to_string(p);
  if (j.contains("nodes")) {
    for (const auto& node : j.at("nodes")) {
      if (node.at("kind").get<std::string>() != "step") continue;
      const int id = node.at("id").get<int>();
      if (id < 1 || id > m) {
        throw InvalidInputError("step node id " + std::to_string(id) +
                                " outside 1.." + std::to_string(m));
      }
      labels[id - 1] = node.at("label").get<std::string>();
    }
  }

  std::vector<DnfPrecondition> dnfs;
  for (const auto& [key, value] : j.at("preconditions").items()) {
    const int step = std::stoi(key);
    if (step < 1 || step > m) {
      throw InvalidInputError("precondition for step " + key +
                              " outside 1.." + std::to_string(m));
    }
    DnfPrecondition dnf;
    dnf.step = step;
    if (value.is_null()) {
      dnf.always_true = false;  // never eligible
    } else if (value.is_array() && value.empty()) {
      dnf.always_true = true;
    } else {
      dnf = normalize_dnf(step, value.get<std::vector<std::vector<int>>>());
      for (const auto& term : dnf.terms) {
        for (int q : term) {
          if (q < 1 || q > m) {
            throw InvalidInputError("precondition literal " +
                                    std::to_string(q) + " outside 1.." +
                                    std::to_string(m));
          }
        }
      }
    }
    dnfs.push_back(std::move(dnf));
  }

  // nodes and edges are reconstructed from the preconditions so that hand
  // written files only need m + preconditions; for files we wrote this
  // reproduces the original structure exactly
  return consolidate_graph(dnfs, labels);
}

}  // namespace taskgraph
