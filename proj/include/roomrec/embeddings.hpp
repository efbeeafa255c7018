#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roomrec/corpus.hpp"

namespace roomrec {

struct EmbeddingConfig {
  std::size_t dim = 32;
  double x_max = 100.0;
  double exponent = 0.75;  // weighting exponent of f(.)
  std::size_t iterations = 100;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
};

// Category vectors trained from room-level co-occurrence counts with the
// weighted least-squares objective f(C_ij)(w_i.w_j + b_i + b_j - log C_ij)^2.
struct EmbeddingSet {
  std::vector<std::string> categories;
  EmbeddingConfig config;
  std::vector<double> vectors;  // V x dim
  std::vector<double> bias;     // V
  std::vector<std::uint8_t> cooccurrence_mask;  // V x V, C_ij > 0
  std::vector<double> objective_history;        // summed loss per epoch

  std::size_t category_index(const std::string& name) const;
  bool cooccurred(std::size_t i, std::size_t j) const {
    return cooccurrence_mask[i * categories.size() + j] != 0;
  }
};

// f(x) = (x/x_max)^exponent below x_max, 1 otherwise.
double cooccurrence_weight(double x, double x_max, double exponent);

EmbeddingSet train_embeddings(const SquareMatrix& cooccurrence,
                              const std::vector<std::string>& categories,
                              const EmbeddingConfig& config);

// Cosine similarity of the trained vectors, in [-1,1].
double pairwise_similarity(const EmbeddingSet& emb, const std::string& i, const std::string& j);

}  // namespace roomrec
