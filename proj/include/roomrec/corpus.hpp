#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "roomrec/errors.hpp"
#include "roomrec/interner.hpp"

namespace roomrec {

struct HsvColor {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

struct ObjectPart {
  std::string label;
  std::vector<std::string> available_materials;
  std::optional<std::string> assigned_material;
};

struct ObjectInstance {
  std::string instance_id;
  std::string category;
  double footprint_area = 0.0;  // m^2, projected onto the floor
  bool floor_contact = true;
  std::optional<std::array<double, 2>> position;  // room coordinates, m
  std::vector<ObjectPart> parts;
  std::map<std::string, HsvColor> material_colors;
};

struct RoomDocument {
  std::string room_id;
  std::vector<std::string> labels;  // room type names; set semantics
  std::vector<ObjectInstance> objects;
  double floor_area = 0.0;  // m^2, > 0
};

// A validated scene corpus. Interners give the dense category/room-type/
// material indices (V, U, M) shared by every downstream model.
struct Corpus {
  std::vector<RoomDocument> rooms;
  StringInterner categories;
  StringInterner room_types;
  StringInterner materials;

  std::size_t vocab_size() const { return categories.size(); }
  std::size_t num_room_types() const { return room_types.size(); }
};

// Row-major dense square matrix over the category vocabulary.
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<double> data;

  explicit SquareMatrix(std::size_t dim = 0) : n(dim), data(dim * dim, 0.0) {}
  double& at(std::size_t i, std::size_t j) { return data[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

struct OccupationPrior {
  double delta = 0.0;  // mean occupation proportion, in [0,1]
  double sigma = 1e-6;  // fitted std, floored at 1e-6
};

// Max instance count per (category, room type), learned from the corpus.
struct CountPrior {
  std::size_t num_categories = 0;
  std::size_t num_room_types = 0;
  std::vector<int> counts;  // category-major

  int at(std::size_t category, std::size_t room_type) const {
    return counts[category * num_room_types + room_type];
  }
  int& at(std::size_t category, std::size_t room_type) {
    return counts[category * num_room_types + room_type];
  }
};

// User-study suitability scores in [0,5], dense over a declared basic
// category subset x all room types.
struct KnowledgeTable {
  std::vector<std::string> categories;
  std::vector<std::string> room_types;
  std::vector<double> scores;  // category-major

  bool has(const std::string& category, const std::string& room_type) const;
  double score(const std::string& category, const std::string& room_type) const;
};

Corpus load_corpus(const std::string& path);
void save_corpus(const Corpus& corpus, const std::string& path);

KnowledgeTable load_knowledge(const std::string& path);
void save_knowledge(const KnowledgeTable& table, const std::string& path);

// Room-level binary co-occurrence: C[i][j] = number of rooms containing at
// least one instance of both i and j; diagonal = rooms containing i.
SquareMatrix count_cooccurrence(const Corpus& corpus);

// Floor-contact footprint sum divided by floor area. Rugs and other
// non-floor-contact objects are excluded.
double occupation_proportion(const RoomDocument& room);

// Gaussian fit (mean/std) of occupation proportions over single-label rooms
// of the given type. Requires >= 5 such rooms.
OccupationPrior fit_occupation_prior(const Corpus& corpus, const std::string& room_type);

// Nearest-rank 95th percentile of per-room instance counts over
// single-label rooms; pairs never observed give 0.
CountPrior count_instance_priors(const Corpus& corpus);

}  // namespace roomrec
