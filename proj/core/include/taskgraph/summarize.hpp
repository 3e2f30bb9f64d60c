#ifndef TASKGRAPH_SUMMARIZE_HPP
#define TASKGRAPH_SUMMARIZE_HPP

#include <string>
#include <vector>

#include "taskgraph/providers.hpp"
#include "taskgraph/sequence.hpp"

namespace taskgraph {

struct SummarizeConfig {
  /// Query appended to the transcript; {task} is replaced by the task name.
  std::string prompt_template =
      "Based on this description list down the key steps for {task} using "
      "short phrases.";
  /// Transcripts longer than this many characters are truncated (the front
  /// of the transcript is kept) before prompting.
  std::size_t transcript_char_budget = 24000;
};

/// Summary of one transcript plus the raw completion for auditing.
struct SummaryRecord {
  SummaryStepSequence sequence;
  std::string raw_completion;
  bool truncated = false;
};

/// Transcript text, a newline, then the query template with {task}
/// substituted. Templates without the placeholder are used verbatim.
Prompt build_prompt(const std::string& task_name,
                    const std::string& transcript_text,
                    const SummarizeConfig& config = {});

/// Extracts the step list from a model completion. A line becomes a step
/// when it starts with an enumeration marker ("1.", "2)", "-", "*", "•");
/// the marker is stripped. Unmarked lines (preamble or trailing chatter)
/// and empty lines are dropped. Throws EmptySummaryError when no step
/// remains.
std::vector<std::string> parse_steps(const std::string& completion_text);

/// build_prompt -> complete -> parse_steps, recording the raw completion.
SummaryRecord summarize_transcript(const Transcript& transcript,
                                   CompletionProvider& provider,
                                   const SummarizeConfig& config = {});

}  // namespace taskgraph

#endif  // TASKGRAPH_SUMMARIZE_HPP
