#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "roomrec/corpus.hpp"

namespace roomrec {

// Parameters for the synthetic fixture generator. The planted structure
// (multinomials, substitute pairs, adjacency, material rules) is returned
// alongside the corpus so recovery tests can check against it.
struct GeneratorSpec {
  std::size_t num_room_types = 4;
  std::size_t num_categories = 30;
  std::size_t rooms_per_type = 500;
  std::size_t objects_per_room = 20;

  // Concentrate each room type's mass on a disjoint vocabulary slice
  // instead of drawing a dense Dirichlet sample.
  bool disjoint_vocabulary = false;

  // Categories that share contexts but never co-occur: within a room, a
  // single member of each pair is chosen and all draws map to it.
  std::vector<std::pair<std::size_t, std::size_t>> substitute_pairs;

  // Companion is placed within `radius` meters of an anchor instance.
  struct AdjacencyRule {
    std::size_t anchor = 0;
    std::size_t companion = 0;
    double radius = 0.5;
  };
  std::vector<AdjacencyRule> adjacency_rules;
  bool with_positions = true;

  // Both members of a pair always receive a material from the same family.
  struct MaterialRule {
    std::size_t a = 0;
    std::size_t b = 0;
    int fixed_family = -1;  // -1: family chosen per room
  };
  std::vector<MaterialRule> material_rules;
  std::size_t num_material_families = 2;
  std::size_t materials_per_family = 2;

  double floor_area = 25.0;
  double target_occupation = 0.3;  // mean per-room proportion
  double occupation_noise = 0.05;
};

struct PlantedTruth {
  // num_room_types x num_categories; each row sums to 1.
  std::vector<std::vector<double>> phi;
};

struct SyntheticCorpus {
  Corpus corpus;
  PlantedTruth truth;
};

// Deterministic in (seed, spec).
SyntheticCorpus generate_synthetic_corpus(std::uint64_t seed, const GeneratorSpec& spec);

// The planted per-type multinomials alone, without generating rooms.
PlantedTruth planted_multinomials(std::uint64_t seed, const GeneratorSpec& spec);

// Deterministic color for a generated material id, shared by generator and
// tests.
HsvColor synthetic_material_color(std::size_t family, std::size_t index);

}  // namespace roomrec
