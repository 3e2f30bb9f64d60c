#include "taskgraph/label.hpp"

#include <algorithm>

#include "taskgraph/errors.hpp"

namespace taskgraph {

std::pair<double, std::string> step_cluster_similarity(
    const EmbeddingVector& step_embedding, const KeyStep& cluster) {
  if (cluster.members.empty()) {
    throw InvalidInputError("cluster " + std::to_string(cluster.id) +
                            " has no members");
  }
  double best = -2.0;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < cluster.members.size(); ++i) {
    const double sim = cosine(step_embedding, cluster.members[i].embedding);
    if (sim > best) {
      best = sim;
      best_index = i;
    }
  }
  return {best, cluster.members[best_index].sentence};
}

std::vector<std::pair<int, int>> greedy_align(
    const std::vector<std::vector<double>>& similarity) {
  // One descending sort replaces the per-iteration rescan: retiring a row
  // and column never raises another entry, so scanning the sorted list and
  // skipping retired rows/columns selects exactly the rescan's argmax
  // sequence, with ties already in (row, column) order.
  struct Entry {
    double score;
    int row;
    int col;
  };
  std::vector<Entry> entries;
  for (std::size_t a = 0; a < similarity.size(); ++a) {
    for (std::size_t b = 0; b < similarity[a].size(); ++b) {
      if (similarity[a][b] > 0.0) {
        entries.push_back({similarity[a][b], static_cast<int>(a),
                           static_cast<int>(b)});
      }
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    if (x.score != y.score) return x.score > y.score;
    if (x.row != y.row) return x.row < y.row;
    return x.col < y.col;
  });

  const std::size_t rows = similarity.size();
  const std::size_t cols = rows == 0 ? 0 : similarity[0].size();
  std::vector<bool> row_used(rows, false), col_used(cols, false);
  std::vector<std::pair<int, int>> selected;
  for (const Entry& e : entries) {
    if (row_used[e.row] || col_used[e.col]) continue;
    row_used[e.row] = true;
    col_used[e.col] = true;
    selected.emplace_back(e.row, e.col);
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

KeyStepSequence label_sequence(const SummaryStepSequence& g,
                               const std::vector<EmbeddingVector>& step_embeddings,
                               const std::vector<KeyStep>& key_steps) {
  if (key_steps.empty()) {
    throw InvalidInputError("labeling needs at least one key step");
  }
  if (step_embeddings.size() != g.steps.size()) {
    throw InvalidInputError("have " + std::to_string(step_embeddings.size()) +
                            " embeddings for " + std::to_string(g.steps.size()) +
                            " summary steps");
  }

  const std::size_t n = g.steps.size();
  const std::size_t m = key_steps.size();
  std::vector<std::vector<double>> scores(n, std::vector<double>(m));
  std::vector<std::vector<std::string>> matches(n, std::vector<std::string>(m));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      auto [score, sentence] =
          step_cluster_similarity(step_embeddings[a], key_steps[b]);
      scores[a][b] = score;
      matches[a][b] = std::move(sentence);
    }
  }

  KeyStepSequence out;
  out.video_id = g.video_id;
  for (const auto& [a, b] : greedy_align(scores)) {
    out.items.push_back({key_steps[b].id, matches[a][b], a + 1});
  }
  return out;
}

KeyStepSequence label_sequence(const SummaryStepSequence& g,
                               EmbeddingProvider& embedder,
                               const std::vector<KeyStep>& key_steps) {
  std::vector<EmbeddingVector> embeddings;
  embeddings.reserve(g.steps.size());
  for (const auto& step : g.steps) embeddings.push_back(embedder.embed(step));
  return label_sequence(g, embeddings, key_steps);
}

}  // namespace taskgraph
