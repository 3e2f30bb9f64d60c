#ifndef TASKGRAPH_RANK_HPP
#define TASKGRAPH_RANK_HPP

#include <string>
#include <vector>

#include "taskgraph/cluster.hpp"
#include "taskgraph/providers.hpp"
#include "taskgraph/sequence.hpp"

namespace taskgraph {

struct RankedSequence {
  KeyStepSequence sequence;
  double score = 0.0;  // log-likelihood; finite
};

struct RankConfig {
  double keep_fraction = 0.75;  // in (0, 1]
  std::string prompt_template =
      "Based on this description list down the key steps for {task} using "
      "short phrases.";
};

/// Renders a key step sequence as a numbered list of cluster labels,
/// "1. <label>\n2. <label>...". Throws InvalidInputError on an id that is
/// not present in key_steps.
std::string render_sequence(const KeyStepSequence& h,
                            const std::vector<KeyStep>& key_steps);

/// Likelihood of the rendered sequence under the ranking prompt (the
/// summarization query with {task} substituted, without any transcript).
double score_sequence(const KeyStepSequence& h, const std::string& task_name,
                      const std::vector<KeyStep>& key_steps,
                      LikelihoodProvider& scorer, const RankConfig& config = {});

/// Keeps the best ceil(keep_fraction * n) sequences by score, descending;
/// equal scores retain their input order. Throws InvalidInputError on empty
/// input or keep_fraction outside (0, 1].
std::vector<RankedSequence> topk_filter(std::vector<RankedSequence> ranked,
                                        double keep_fraction);

}  // namespace taskgraph

#endif  // TASKGRAPH_RANK_HPP
