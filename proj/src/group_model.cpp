#include "roomrec/group_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace roomrec {
namespace {

// Clark-Evans constants: expected nearest-neighbor distance 0.5/sqrt(l),
// per-observation std 0.26136/sqrt(l) under CSR with intensity l.
constexpr double kCsrStd = 0.26136;
constexpr std::size_t kMinObservations = 10;
constexpr std::size_t kMinPositionedRooms = 50;

GroupModel::PairKey make_key(std::string cat_a, std::string part_a, std::string cat_b,
                             std::string part_b, bool& swapped) {
  swapped = std::tie(cat_b, part_b) < std::tie(cat_a, part_a);
  if (swapped) {
    std::swap(cat_a, cat_b);
    std::swap(part_a, part_b);
  }
  return {std::move(cat_a), std::move(part_a), std::move(cat_b), std::move(part_b)};
}

}  // namespace

double normal_quantile(double p) {
  if (p <= 0.0 || p >= 1.0) throw UsageError("normal quantile needs p in (0,1)");
  // Acklam's rational approximation, |rel err| < 1.15e-9.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double q, r;
  if (p < p_low) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

bool GroupModel::grouped(const std::string& cat_a, const std::string& cat_b) const {
  auto ia = std::find(categories.begin(), categories.end(), cat_a);
  auto ib = std::find(categories.begin(), categories.end(), cat_b);
  if (ia == categories.end() || ib == categories.end()) return false;
  return paired[(ia - categories.begin()) * categories.size() + (ib - categories.begin())] != 0;
}

bool GroupModel::similar_materials(const std::string& m1, const std::string& m2) const {
  if (m1 == m2) return true;
  auto f1 = family_of_material.find(m1);
  auto f2 = family_of_material.find(m2);
  return f1 != family_of_material.end() && f2 != family_of_material.end() &&
         f1->second == f2->second;
}

GroupModel build_group_model(const Corpus& corpus, double significance,
                             const std::map<std::string, std::string>& families) {
  if (corpus.rooms.empty()) throw IntegrityError("group model requires a non-empty corpus");
  GroupModel model;
  model.categories = corpus.categories.names();
  model.family_of_material = families;
  const std::size_t v = model.categories.size();
  model.paired.assign(v * v, 0);

  std::size_t positioned_rooms = 0;
  for (const auto& room : corpus.rooms) {
    std::size_t with_position = 0;
    for (const auto& o : room.objects) {
      if (o.position) ++with_position;
    }
    if (with_position >= 2) ++positioned_rooms;
  }

  const SquareMatrix cooc = count_cooccurrence(corpus);

  if (positioned_rooms >= kMinPositionedRooms) {
    // Pooled Clark-Evans statistic per unordered category pair: each
    // nearest-neighbor distance is standardized by its room's intensity.
    std::vector<double> sum_z(v * v, 0.0);
    std::vector<std::size_t> obs(v * v, 0);
    for (const auto& room : corpus.rooms) {
      std::vector<std::vector<std::array<double, 2>>> positions(v);
      for (const auto& o : room.objects) {
        if (o.position) positions[corpus.categories.at(o.category)].push_back(*o.position);
      }
      for (std::size_t a = 0; a < v; ++a) {
        if (positions[a].empty()) continue;
        for (std::size_t b = a + 1; b < v; ++b) {
          if (positions[b].empty()) continue;
          const auto standardize = [&](const auto& from, const auto& to) {
            const double intensity = static_cast<double>(to.size()) / room.floor_area;
            const double expected = 0.5 / std::sqrt(intensity);
            const double sd = kCsrStd / std::sqrt(intensity);
            for (const auto& p : from) {
              double nearest = std::numeric_limits<double>::infinity();
              for (const auto& q : to) {
                nearest = std::min(nearest, std::hypot(p[0] - q[0], p[1] - q[1]));
              }
              sum_z[a * v + b] += (nearest - expected) / sd;
              ++obs[a * v + b];
            }
          };
          standardize(positions[a], positions[b]);
          standardize(positions[b], positions[a]);
        }
      }
    }
    const double critical = normal_quantile(1.0 - significance);
    for (std::size_t a = 0; a < v; ++a) {
      for (std::size_t b = a + 1; b < v; ++b) {
        if (obs[a * v + b] < kMinObservations) continue;
        const double n = static_cast<double>(obs[a * v + b]);
        const double z = sum_z[a * v + b] / std::sqrt(n);
        // Association: observed distances significantly below CSR.
        if (z < -critical) {
          model.paired[a * v + b] = 1;
          model.paired[b * v + a] = 1;
        }
      }
    }
  } else {
    for (std::size_t a = 0; a < v; ++a) {
      for (std::size_t b = a + 1; b < v; ++b) {
        const double both = cooc.at(a, b);
        const double denom = std::min(cooc.at(a, a), cooc.at(b, b));
        if (denom > 0.0 && both / denom > 0.5) {
          model.paired[a * v + b] = 1;
          model.paired[b * v + a] = 1;
        }
      }
    }
  }

  // Material co-occurrence counts at (category, part) granularity.
  for (const auto& room : corpus.rooms) {
    for (std::size_t i = 0; i < room.objects.size(); ++i) {
      for (std::size_t j = i + 1; j < room.objects.size(); ++j) {
        const auto& o1 = room.objects[i];
        const auto& o2 = room.objects[j];
        for (const auto& p1 : o1.parts) {
          if (!p1.assigned_material) continue;
          for (const auto& p2 : o2.parts) {
            if (!p2.assigned_material) continue;
            bool swapped = false;
            const auto key = make_key(o1.category, p1.label, o2.category, p2.label, swapped);
            auto& stats = model.material_stats[key];
            auto pair = swapped ? std::make_pair(*p2.assigned_material, *p1.assigned_material)
                                : std::make_pair(*p1.assigned_material, *p2.assigned_material);
            stats.counts[pair] += 1.0;
            stats.total += 1.0;
          }
        }
      }
    }
  }
  return model;
}

double g2_pair(const GroupModel& model, const std::string& cat1, const std::string& part1,
               const std::string& m1, const std::string& cat2, const std::string& part2,
               const std::string& m2) {
  if (!model.grouped(cat1, cat2)) return 0.0;
  bool swapped = false;
  const auto key = make_key(cat1, part1, cat2, part2, swapped);
  auto it = model.material_stats.find(key);
  if (it == model.material_stats.end() || it->second.total <= 0.0) return 0.0;
  const std::string& qa = swapped ? m2 : m1;
  const std::string& qb = swapped ? m1 : m2;
  double value = 0.0;
  for (const auto& [pair, count] : it->second.counts) {
    if (model.similar_materials(qa, pair.first) && model.similar_materials(qb, pair.second)) {
      value += count;
    }
  }
  return value / it->second.total;
}

}  // namespace roomrec
