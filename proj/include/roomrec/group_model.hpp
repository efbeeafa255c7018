#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "roomrec/corpus.hpp"

namespace roomrec {

// Corpus statistics for the material-compatibility rule: which category
// pairs form spatial groups, how their part materials co-occur, and the
// binary material similarity relation (same family).
struct GroupModel {
  std::vector<std::string> categories;
  std::vector<std::uint8_t> paired;  // t(i,j) over the category index

  // (cat_a, part_a, cat_b, part_b) keyed with (cat_a,part_a) <= (cat_b,part_b)
  using PairKey = std::tuple<std::string, std::string, std::string, std::string>;
  struct MaterialStats {
    std::map<std::pair<std::string, std::string>, double> counts;
    double total = 0.0;
  };
  std::map<PairKey, MaterialStats> material_stats;

  std::map<std::string, std::string> family_of_material;

  bool grouped(const std::string& cat_a, const std::string& cat_b) const;
  // s(m,m'): 1 iff same declared family (unknown materials only match
  // themselves).
  bool similar_materials(const std::string& m1, const std::string& m2) const;
};

// t from a Clark-Evans nearest-neighbor test against complete spatial
// randomness when instance positions are available in >= 50 rooms; a
// co-occurrence-rate fallback (> 0.5) otherwise. Material co-occurrence
// counts are tallied from assigned materials.
GroupModel build_group_model(const Corpus& corpus, double significance,
                             const std::map<std::string, std::string>& families = {});

// Group rule: t(o1,o2) * sum over corpus material pairs of
// [count fraction * s(m1,m1')*s(m2,m2')]; 0 when the marginal count is 0.
double g2_pair(const GroupModel& model, const std::string& cat1, const std::string& part1,
               const std::string& m1, const std::string& cat2, const std::string& part2,
               const std::string& m2);

// One-sided upper quantile of the standard normal (Acklam approximation).
double normal_quantile(double p);

}  // namespace roomrec
