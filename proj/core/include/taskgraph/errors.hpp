#ifndef TASKGRAPH_ERRORS_HPP
#define TASKGRAPH_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace taskgraph {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated an operation precondition (bad argument, mismatched
/// dimensions, malformed input file, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// A remote provider call failed after exhausting its retry budget.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// A fixture provider has no recorded response for the request.
class MissingFixtureError : public Error {
 public:
  MissingFixtureError(const std::string& message, std::string prompt_hash)
      : Error(message), prompt_hash_(std::move(prompt_hash)) {}

  const std::string& prompt_hash() const { return prompt_hash_; }

 private:
  std::string prompt_hash_;
};

/// A completion parsed to zero steps; callers may skip the transcript.
class EmptySummaryError : public Error {
 public:
  using Error::Error;
};

/// Clustering retained no cluster at all.
class NoKeyStepsError : public Error {
 public:
  using Error::Error;
};

/// The inferred step dependencies contain a cycle.
class CyclicGraphError : public Error {
 public:
  CyclicGraphError(const std::string& message, std::vector<int> cycle)
      : Error(message), cycle_(std::move(cycle)) {}

  /// Key step ids forming the cycle, in traversal order.
  const std::vector<int>& cycle() const { return cycle_; }

 private:
  std::vector<int> cycle_;
};

/// A rollout got stuck: no step is eligible although the task is incomplete.
class InvalidGraphError : public Error {
 public:
  using Error::Error;
};

}  // namespace taskgraph

#endif  // TASKGRAPH_ERRORS_HPP
