#include "taskgraph/rank.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "taskgraph/errors.hpp"

namespace taskgraph {

namespace {

std::string substitute_task(std::string text, const std::string& task_name) {
  const std::string placeholder = "{task}";
  std::size_t at = 0;
  while ((at = text.find(placeholder, at)) != std::string::npos) {
    text.replace(at, placeholder.size(), task_name);
    at += task_name.size();
  }
  return text;
}

}  // namespace

std::string render_sequence(const KeyStepSequence& h,
                            const std::vector<KeyStep>& key_steps) {
  std::map<int, const std::string*> labels;
  for (const auto& k : key_steps) labels[k.id] = &k.label;
  std::ostringstream out;
  for (std::size_t i = 0; i < h.items.size(); ++i) {
    const auto it = labels.find(h.items[i].key_step_id);
    if (it == labels.end()) {
      throw InvalidInputError("sequence " + h.video_id +
                              " references unknown key step " +
                              std::to_string(h.items[i].key_step_id));
    }
    if (i > 0) out << '\n';
    out << (i + 1) << ". " << *it->second;
  }
  return out.str();
}

double score_sequence(const KeyStepSequence& h, const std::string& task_name,
                      const std::vector<KeyStep>& key_steps,
                      LikelihoodProvider& scorer, const RankConfig& config) {
  const std::string rendered = render_sequence(h, key_steps);
  if (rendered.empty()) {
    throw InvalidInputError("cannot score an empty key step sequence");
  }
  const Prompt prompt(substitute_task(config.prompt_template, task_name));
  return scorer.score_loglik(prompt, rendered);
}

std::vector<RankedSequence> topk_filter(std::vector<RankedSequence> ranked,
                                        double keep_fraction) {
  if (ranked.empty()) {
    throw InvalidInputError("cannot filter an empty ranking");
  }
  if (!(keep_fraction > 0.0) || keep_fraction > 1.0) {
    throw InvalidInputError("keep_fraction must lie in (0, 1]");
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedSequence& a, const RankedSequence& b) {
                     return a.score > b.score;
                   });
  const auto kept = static_cast<std::size_t>(
      std::ceil(keep_fraction * static_cast<double>(ranked.size())));
  ranked.resize(std::min(kept, ranked.size()));
  return ranked;
}

}  // namespace taskgraph
