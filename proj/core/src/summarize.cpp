#include "taskgraph/summarize.hpp"

#include <cctype>

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

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

/// Strips a leading enumeration marker; returns false if the line has none.
bool strip_marker(std::string& line) {
  if (line.empty()) return false;
  std::size_t at = 0;
  if (std::isdigit(static_cast<unsigned char>(line[0]))) {
    while (at < line.size() &&
           std::isdigit(static_cast<unsigned char>(line[at]))) {
      ++at;
    }
    if (at >= line.size() || (line[at] != '.' && line[at] != ')')) return false;
    ++at;
  } else if (line[0] == '-' || line[0] == '*') {
    at = 1;
  } else if (line.rfind("\xe2\x80\xa2", 0) == 0) {  // UTF-8 bullet
    at = 3;
  } else {
    return false;
  }
  line = trim(line.substr(at));
  return true;
}

}  // namespace

Prompt build_prompt(const std::string& task_name,
                    const std::string& transcript_text,
                    const SummarizeConfig& config) {
  if (task_name.empty()) {
    throw InvalidInputError("task name must not be empty");
  }
  if (transcript_text.empty()) {
    throw InvalidInputError("transcript text must not be empty");
  }
  return Prompt(transcript_text + "\n" +
                substitute_task(config.prompt_template, task_name));
}

std::vector<std::string> parse_steps(const std::string& completion_text) {
  std::vector<std::string> steps;
  std::size_t start = 0;
  while (start <= completion_text.size()) {
    const auto newline = completion_text.find('\n', start);
    std::string line = trim(completion_text.substr(
        start, newline == std::string::npos ? std::string::npos
                                            : newline - start));
    if (strip_marker(line) && !line.empty()) {
      steps.push_back(std::move(line));
    }
    if (newline == std::string::npos) break;
    start = newline + 1;
  }
  if (steps.empty()) {
    throw EmptySummaryError("completion contains no enumerated steps");
  }
  return steps;
}

SummaryRecord summarize_transcript(const Transcript& transcript,
                                   CompletionProvider& provider,
                                   const SummarizeConfig& config) {
  if (transcript.video_id.empty()) {
    throw InvalidInputError("transcript is missing a video id");
  }
  SummaryRecord record;
  record.sequence.video_id = transcript.video_id;
  record.truncated = transcript.text.size() > config.transcript_char_budget;
  const std::string text =
      record.truncated ? transcript.text.substr(0, config.transcript_char_budget)
                       : transcript.text;
  const Prompt prompt = build_prompt(transcript.task_name, text, config);
  record.raw_completion = provider.complete(prompt);
  record.sequence.steps = parse_steps(record.raw_completion);
  return record;
}

}  // namespace taskgraph
