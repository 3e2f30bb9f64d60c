#ifndef TASKGRAPH_EMBEDDING_HPP
#define TASKGRAPH_EMBEDDING_HPP

#include <cstddef>
#include <vector>

namespace taskgraph {

/// Unit-norm sentence embedding. The L2 norm must be 1 within 1e-6; the
/// constructor rejects anything else, so a populated EmbeddingVector is
/// always safe to feed into cosine computations.
class EmbeddingVector {
 public:
  explicit EmbeddingVector(std::vector<double> components);

  /// Normalizes a raw vector to unit length. Rejects the zero vector.
  static EmbeddingVector normalized(std::vector<double> raw);

  std::size_t dimension() const { return components_.size(); }
  const std::vector<double>& components() const { return components_; }

 private:
  std::vector<double> components_;
};

/// Cosine similarity. Throws InvalidInputError on dimension mismatch.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

}  // namespace taskgraph

#endif  // TASKGRAPH_EMBEDDING_HPP
