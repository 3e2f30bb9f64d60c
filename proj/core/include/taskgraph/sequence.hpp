#ifndef TASKGRAPH_SEQUENCE_HPP
#define TASKGRAPH_SEQUENCE_HPP

#include <string>
#include <vector>

namespace taskgraph {

/// One instructional-video transcript for a task.
struct Transcript {
  std::string task_name;
  std::string video_id;
  std::string text;
};

/// Ordered free-text steps extracted from one transcript.
struct SummaryStepSequence {
  std::string video_id;
  std::vector<std::string> steps;
};

/// A summary step matched to a key step cluster. source_position is the
/// 1-based position of the summary step that produced the match.
struct KeyStepItem {
  int key_step_id = 0;
  std::string matched_sentence;
  int source_position = 0;
};

/// A transcript re-expressed as an ordered list of key steps. Key step ids
/// are distinct within one sequence and source positions strictly increase.
struct KeyStepSequence {
  std::string video_id;
  std::vector<KeyStepItem> items;
};

}  // namespace taskgraph

#endif  // TASKGRAPH_SEQUENCE_HPP
