#include "taskgraph/simulate.hpp"

#include <algorithm>
#include <string>

#include "taskgraph/errors.hpp"
#include "taskgraph/rng.hpp"

namespace taskgraph {

KeyStepSequence rollout(const TaskGraph& graph, std::uint64_t seed,
                        double drop_prob) {
  Rng rng(seed);
  KeyStepSequence out;
  out.video_id = "sim-" + std::to_string(seed);

  std::uint64_t completed = 0;
  const int m = graph.m;
  for (int executed = 1; executed <= m; ++executed) {
    std::vector<int> eligible;
    for (int p = 1; p <= m; ++p) {
      if ((completed >> (p - 1)) & 1u) continue;
      if (graph.step_eligible(p, completed)) eligible.push_back(p);
    }
    if (eligible.empty()) {
      throw InvalidGraphError(
          "no eligible step after " + std::to_string(executed - 1) + " of " +
          std::to_string(m) + " steps; the graph is not completable");
    }
    const int p = eligible[rng.uniform_index(eligible.size())];
    const bool drop = drop_prob > 0.0 && rng.bernoulli(drop_prob);
    if (!drop) {
      out.items.push_back({p, graph.step_label(p), executed});
    }
    completed |= std::uint64_t{1} << (p - 1);
  }
  return out;
}

std::vector<KeyStepSequence> generate_dataset(const TaskGraph& graph,
                                              const RolloutConfig& config) {
  if (config.count < 1) {
    throw InvalidInputError("rollout count must be at least 1");
  }
  std::vector<KeyStepSequence> out;
  out.reserve(config.count);
  for (int i = 0; i < config.count; ++i) {
    out.push_back(rollout(graph, config.seed + i, config.drop_prob));
  }
  return out;
}

namespace {

// True when completing step b implies step a was completed beforehand in
// every valid execution: every term of b's precondition contains a step that
// (transitively) guarantees a.
bool guarantees(const std::vector<DnfPrecondition>& pre, int b, int a) {
  const DnfPrecondition& dnf = pre[b - 1];
  if (dnf.trivial()) return false;
  for (const auto& term : dnf.terms) {
    bool covered = false;
    for (int c : term) {
      if (c == a || guarantees(pre, c, a)) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

std::vector<std::string> default_labels(int m) {
  std::vector<std::string> labels;
  labels.reserve(m);
  for (int p = 1; p <= m; ++p) labels.push_back("k" + std::to_string(p));
  return labels;
}

}  // namespace

TaskGraph random_graph(const RandomGraphConfig& config) {
  const int m = config.m;
  if (m < 2) throw InvalidInputError("random graphs need m >= 2");
  if (config.density < 0.0 || config.density > 1.0) {
    throw InvalidInputError("density must lie in [0,1]");
  }

  Rng rng(config.seed);
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i + 1;
  for (int i = m - 1; i > 0; --i) {
    std::swap(order[i], order[rng.uniform_index(i + 1)]);
  }

  std::vector<DnfPrecondition> pre(m);
  for (int p = 1; p <= m; ++p) {
    pre[p - 1].step = p;
    pre[p - 1].always_true = true;
  }

  for (int t = 0; t < m; ++t) {
    const int p = order[t];
    std::vector<int> literals;
    for (int i = 0; i < t; ++i) {
      if (rng.bernoulli(config.density)) literals.push_back(order[i]);
    }

    if (t >= 2 && rng.bernoulli(config.or_prob)) {
      // 2-term OR over two earlier steps neither of which guarantees the
      // other (otherwise one branch would be observationally dead)
      std::vector<std::pair<int, int>> pairs;
      for (int i = 0; i < t; ++i) {
        for (int j = i + 1; j < t; ++j) {
          const int u = order[i], v = order[j];
          if (!guarantees(pre, u, v) && !guarantees(pre, v, u)) {
            pairs.emplace_back(u, v);
          }
        }
      }
      if (!pairs.empty()) {
        const auto [u, v] = pairs[rng.uniform_index(pairs.size())];
        pre[p - 1] = normalize_dnf(p, {{u}, {v}});
        continue;
      }
    }

    // AND of the sampled literals, dropping any literal already guaranteed
    // by another (later steps first, since guarantees only point backwards)
    std::sort(literals.begin(), literals.end(), [&](int a, int b) {
      const auto pos = [&](int s) {
        return std::find(order.begin(), order.end(), s) - order.begin();
      };
      return pos(a) > pos(b);
    });
    std::vector<int> kept;
    for (int a : literals) {
      const bool redundant = std::any_of(kept.begin(), kept.end(), [&](int b) {
        return guarantees(pre, b, a);
      });
      if (!redundant) kept.push_back(a);
    }
    if (!kept.empty()) pre[p - 1] = normalize_dnf(p, {kept});
  }

  return consolidate_graph(pre, default_labels(m));
}

TaskGraph chain_graph(int m) {
  if (m < 1) throw InvalidInputError("chain graphs need m >= 1");
  std::vector<DnfPrecondition> pre;
  for (int p = 2; p <= m; ++p) {
    pre.push_back(normalize_dnf(p, {{p - 1}}));
  }
  return consolidate_graph(pre, default_labels(m));
}

}  // namespace taskgraph
