#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roomrec/corpus.hpp"

namespace roomrec {

struct LldaConfig {
  double alpha = -1.0;  // < 0: use the 50/U default
  double beta = 0.01;
  std::size_t iterations = 500;
  std::uint64_t seed = 0;
  bool average_samples = false;  // average phi over post-burn-in sweeps
};

// Trained labeled topic model: one multinomial over the category
// vocabulary per room type. Immutable after training.
struct LldaModel {
  std::vector<std::string> room_types;
  std::vector<std::string> categories;
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  std::vector<double> phi;                // U x V, rows sum to 1
  std::vector<double> topic_word_counts;  // U x V

  std::size_t num_room_types() const { return room_types.size(); }
  std::size_t vocab_size() const { return categories.size(); }
  std::size_t room_type_index(const std::string& name) const;

  // Row view of phi for one room type.
  std::vector<double> phi_row(const std::string& room_type) const;
};

struct PosteriorReport {
  std::vector<double> theta;            // over all room types, sums to 1
  std::vector<std::string> predicted;   // labels with theta >= threshold
  std::size_t unknown_dropped = 0;      // tokens outside the vocabulary
};

// Collapsed Gibbs sampling with each token's topic restricted to its
// room's label set. Deterministic given the config seed.
LldaModel train_llda(const Corpus& corpus, const LldaConfig& config);

// Gibbs inference over a bag of category names with all room types
// admissible. Falls back to the argmax label when thresholding selects
// nothing.
PosteriorReport predict_room_types(const LldaModel& model,
                                   const std::vector<std::string>& objects, double threshold,
                                   std::uint64_t seed = 0, std::size_t iterations = 100);

// Unnormalized per-category sum of phi rows over the label set.
std::vector<double> hybrid_occurrence(const LldaModel& model,
                                      const std::vector<std::string>& labels);

LldaModel load_model(const std::string& path);
void save_model(const LldaModel& model, const std::string& path);

}  // namespace roomrec
