#include "taskgraph/cluster.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "taskgraph/errors.hpp"

namespace taskgraph {

std::vector<std::vector<int>> build_similarity_graph(
    const std::vector<EmbeddingVector>& embeddings, double threshold) {
  const int n = static_cast<int>(embeddings.size());
  for (int i = 1; i < n; ++i) {
    if (embeddings[i].dimension() != embeddings[0].dimension()) {
      throw InvalidInputError("embeddings disagree on dimension");
    }
  }
  std::vector<std::vector<int>> adj(n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (cosine(embeddings[u], embeddings[v]) >= threshold) {
        adj[u].push_back(v);
        adj[v].push_back(u);
      }
    }
  }
  return adj;
}

namespace {

// Bron-Kerbosch with the Tomita pivot: recurse on P \ N(pivot) where the
// pivot maximizes |N(pivot) ∩ P| over P ∪ X.
class CliqueEnumerator {
 public:
  explicit CliqueEnumerator(const std::vector<std::vector<int>>& adj)
      : adj_(adj) {}

  std::vector<std::vector<int>> run() {
    std::vector<int> p(adj_.size());
    for (std::size_t i = 0; i < adj_.size(); ++i) p[i] = static_cast<int>(i);
    std::vector<int> r, x;
    expand(r, p, x);
    std::sort(out_.begin(), out_.end());
    return std::move(out_);
  }

 private:
  bool connected(int u, int v) const {
    const auto& nu = adj_[u];
    return std::binary_search(nu.begin(), nu.end(), v);
  }

  void expand(std::vector<int>& r, std::vector<int> p, std::vector<int> x) {
    if (p.empty() && x.empty()) {
      out_.push_back(r);  // sorted by the caller
      return;
    }
    int pivot = -1;
    std::size_t best = 0;
    for (const auto* side : {&p, &x}) {
      for (int u : *side) {
        std::size_t k = 0;
        for (int v : p) {
          if (connected(u, v)) ++k;
        }
        if (pivot < 0 || k > best) {
          pivot = u;
          best = k;
        }
      }
    }
    std::vector<int> candidates;
    for (int v : p) {
      if (!connected(pivot, v) && v != pivot) candidates.push_back(v);
    }
    if (std::find(p.begin(), p.end(), pivot) != p.end()) {
      candidates.push_back(pivot);
    }
    for (int v : candidates) {
      std::vector<int> np, nx;
      for (int w : p) {
        if (connected(v, w)) np.push_back(w);
      }
      for (int w : x) {
        if (connected(v, w)) nx.push_back(w);
      }
      r.push_back(v);
      expand(r, std::move(np), std::move(nx));
      r.pop_back();
      p.erase(std::find(p.begin(), p.end(), v));
      x.push_back(v);
    }
  }

  const std::vector<std::vector<int>>& adj_;
  std::vector<std::vector<int>> out_;
};

}  // namespace

std::vector<std::vector<int>> enumerate_maximal_cliques(
    const std::vector<std::vector<int>>& adjacency) {
  if (adjacency.empty()) return {};
  std::vector<std::vector<int>> sorted_adj = adjacency;
  for (auto& nbrs : sorted_adj) std::sort(nbrs.begin(), nbrs.end());
  auto cliques = CliqueEnumerator(sorted_adj).run();
  for (auto& c : cliques) std::sort(c.begin(), c.end());
  std::sort(cliques.begin(), cliques.end());
  return cliques;
}

std::vector<std::vector<int>> filter_cliques(
    const std::vector<std::vector<int>>& cliques, int min_clique_size) {
  std::vector<std::vector<int>> surviving;
  for (const auto& c : cliques) {
    if (static_cast<int>(c.size()) >= min_clique_size) surviving.push_back(c);
  }
  // assign each shared vertex to the largest surviving clique; the clique
  // list is lexicographically sorted, so the first of equal-sized
  // candidates is the lexicographically smallest
  std::map<int, std::size_t> owner;
  for (std::size_t i = 0; i < surviving.size(); ++i) {
    for (int v : surviving[i]) {
      auto it = owner.find(v);
      if (it == owner.end() ||
          surviving[i].size() > surviving[it->second].size()) {
        owner[v] = i;
      }
    }
  }
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < surviving.size(); ++i) {
    std::vector<int> kept;
    for (int v : surviving[i]) {
      if (owner[v] == i) kept.push_back(v);
    }
    if (!kept.empty()) out.push_back(std::move(kept));
  }
  return out;
}

namespace {

std::set<std::string> video_support(const KeyStep& k) {
  std::set<std::string> videos;
  for (const auto& member : k.members) videos.insert(member.video_id);
  return videos;
}

double inter_cluster_similarity(const KeyStep& a, const KeyStep& b) {
  double sum = 0.0;
  for (const auto& ma : a.members) {
    for (const auto& mb : b.members) {
      sum += cosine(ma.embedding, mb.embedding);
    }
  }
  return sum / (static_cast<double>(a.members.size()) * b.members.size());
}

std::string medoid_label(const KeyStep& k) {
  const std::size_t dim = k.members.front().embedding.dimension();
  std::vector<double> mean(dim, 0.0);
  for (const auto& member : k.members) {
    for (std::size_t i = 0; i < dim; ++i) {
      mean[i] += member.embedding.components()[i];
    }
  }
  std::size_t best = 0;
  double best_dot = -1e300;
  for (std::size_t j = 0; j < k.members.size(); ++j) {
    double dot = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      dot += k.members[j].embedding.components()[i] * mean[i];
    }
    if (dot > best_dot) {
      best_dot = dot;
      best = j;
    }
  }
  return k.members[best].sentence;
}

}  // namespace

double sequence_overlap(const KeyStep& a, const KeyStep& b) {
  const auto va = video_support(a);
  const auto vb = video_support(b);
  if (va.empty() || vb.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& v : va) {
    if (vb.count(v)) ++common;
  }
  return static_cast<double>(common) / std::min(va.size(), vb.size());
}

std::vector<KeyStep> merge_clusters(std::vector<KeyStep> clusters,
                                    const ClusterConfig& config) {
  while (clusters.size() > 1) {
    double best_sim = 0.0;
    std::size_t best_i = 0, best_j = 0;
    bool found = false;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const double sim = inter_cluster_similarity(clusters[i], clusters[j]);
        if (sim < config.merge_sim_threshold) continue;
        if (sequence_overlap(clusters[i], clusters[j]) >
            config.merge_overlap_threshold) {
          continue;
        }
        if (!found || sim > best_sim) {
          found = true;
          best_sim = sim;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (!found) break;
    auto& dst = clusters[best_i].members;
    auto& src = clusters[best_j].members;
    dst.insert(dst.end(), std::make_move_iterator(src.begin()),
               std::make_move_iterator(src.end()));
    clusters.erase(clusters.begin() + best_j);
  }

  for (std::size_t i = 0; i < clusters.size(); ++i) {
    clusters[i].id = static_cast<int>(i) + 1;
    clusters[i].label = medoid_label(clusters[i]);
  }
  return clusters;
}

std::vector<KeyStep> identify_key_steps(
    const std::vector<SummaryStepSequence>& sequences,
    EmbeddingProvider& embedder, const ClusterConfig& config) {
  if (sequences.empty()) {
    throw InvalidInputError("key step identification needs >= 1 sequence");
  }

  std::vector<KeyStepMember> instances;
  for (const auto& g : sequences) {
    for (std::size_t i = 0; i < g.steps.size(); ++i) {
      instances.push_back({g.steps[i], g.video_id, static_cast<int>(i) + 1,
                           embedder.embed(g.steps[i])});
    }
  }

  std::vector<EmbeddingVector> embeddings;
  embeddings.reserve(instances.size());
  for (const auto& inst : instances) embeddings.push_back(inst.embedding);

  const auto adjacency = build_similarity_graph(embeddings, config.sim_threshold);
  const auto cliques = enumerate_maximal_cliques(adjacency);
  const auto retained = filter_cliques(cliques, config.min_clique_size);

  std::vector<KeyStep> clusters;
  for (const auto& clique : retained) {
    KeyStep k;
    k.id = static_cast<int>(clusters.size()) + 1;
    for (int v : clique) k.members.push_back(instances[v]);
    clusters.push_back(std::move(k));
  }
  clusters = merge_clusters(std::move(clusters), config);
  if (clusters.empty()) {
    throw NoKeyStepsError("no clique with at least " +
                          std::to_string(config.min_clique_size) +
                          " sentences survived clustering");
  }
  return clusters;
}

}  // namespace taskgraph
