#include "taskgraph/embedding.hpp"

#include <cmath>
#include <utility>

#include "taskgraph/errors.hpp"

namespace taskgraph {

namespace {

double l2_norm(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace

EmbeddingVector::EmbeddingVector(std::vector<double> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw InvalidInputError("embedding must have a positive dimension");
  }
  const double norm = l2_norm(components_);
  if (std::abs(norm - 1.0) > 1e-6) {
    throw InvalidInputError("embedding is not unit-norm (|v| = " +
                            std::to_string(norm) + ")");
  }
}

EmbeddingVector EmbeddingVector::normalized(std::vector<double> raw) {
  const double norm = l2_norm(raw);
  if (norm == 0.0) {
    throw InvalidInputError("cannot normalize the zero vector");
  }
  for (double& x : raw) x /= norm;
  return EmbeddingVector(std::move(raw));
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dimension() != b.dimension()) {
    throw InvalidInputError("embedding dimension mismatch: " +
                            std::to_string(a.dimension()) + " vs " +
                            std::to_string(b.dimension()));
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    dot += a.components()[i] * b.components()[i];
  }
  return dot;
}

}  // namespace taskgraph
