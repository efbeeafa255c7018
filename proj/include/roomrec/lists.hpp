#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "roomrec/corpus.hpp"
#include "roomrec/embeddings.hpp"
#include "roomrec/llda.hpp"

namespace roomrec {

struct ListEntry {
  std::string category;
  double probability = 0.0;  // occurrence probability (relative weight)
  int count_lo = 0;          // 0 or 1
  int count_hi = 0;
};

struct RecommendationList {
  std::string list_id;
  std::vector<std::string> room_types;  // label set, sorted
  std::vector<ListEntry> entries;
};

struct ResidenceRoom {
  std::string room_id;
  std::vector<std::string> labels;
  double floor_area = 0.0;
};

struct Residence {
  std::vector<ResidenceRoom> rooms;
};

struct ListAssignment {
  std::map<std::string, std::string> list_of_room;  // room_id -> list_id
  double objective = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
};

// Canonical key for a (possibly hybrid) label set: sorted, joined by '+'.
std::string label_set_key(std::vector<std::string> labels);

// Recursively split along substitute pairs: entries with embedding
// similarity >= threshold that never co-occur at room level go to separate
// lists; everything else is duplicated into both.
std::vector<RecommendationList> split_list(const RecommendationList& list,
                                           const EmbeddingSet& emb, double threshold);

// Probability-weighted sum of suitability scores. Hybrid label sets score
// each category by its best room type.
double match_expectation(const RecommendationList& list,
                         const std::vector<std::string>& room_types,
                         const KnowledgeTable& knowledge);

using CandidateLists = std::map<std::string, std::vector<RecommendationList>>;

// Top-k categories by (hybrid) occurrence probability with count bounds
// from the knowledge scores and corpus priors, split along substitutes.
CandidateLists build_candidate_lists(const LldaModel& model,
                                     const std::vector<std::vector<std::string>>& label_sets,
                                     const EmbeddingSet& emb, const KnowledgeTable& knowledge,
                                     const CountPrior& priors, int top_k);

// Maximizes H1 + lambda*H2. Exhaustive when the assignment space is at
// most 10^6 combinations, otherwise seeded local search. With lambda > 0,
// rooms of a repeated type must take pairwise-distinct lists while
// candidates last; forced reuse contributes 0 to H2.
ListAssignment assign_lists(const Residence& residence, const CandidateLists& candidates,
                            const KnowledgeTable& knowledge, double lambda,
                            std::uint64_t seed = 0);

Residence load_residence(const std::string& path);
void save_residence(const Residence& residence, const std::string& path);

// Per-room chosen lists plus the assignment objective, as written to and
// read from lists.json.
struct RoomLists {
  Residence residence;
  std::map<std::string, RecommendationList> list_of_room;  // room_id -> list
  double objective = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
};

RoomLists load_room_lists(const std::string& path);
void save_room_lists(const RoomLists& lists, const std::string& path);

}  // namespace roomrec
