#include "roomrec/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "roomrec/rng.hpp"

namespace roomrec {
namespace {

constexpr double kTau = 6.283185307179586476925286766559;

std::string category_name(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "cat%03zu", i);
  return buf;
}

std::string material_name(std::size_t family, std::size_t index) {
  return "fam" + std::to_string(family) + "_m" + std::to_string(index);
}

// Derived stream so planted_multinomials and the full generator agree.
std::uint64_t phi_seed(std::uint64_t seed) { return seed ^ 0x9e3779b97f4a7c15ULL; }

}  // namespace

HsvColor synthetic_material_color(std::size_t family, std::size_t index) {
  HsvColor c;
  c.h = std::fmod(0.13 + 0.31 * static_cast<double>(family), 1.0);
  c.s = 0.4 + 0.1 * static_cast<double>(index % 5);
  c.v = 0.3 + 0.15 * static_cast<double>((family + index) % 4);
  return c;
}

PlantedTruth planted_multinomials(std::uint64_t seed, const GeneratorSpec& spec) {
  if (spec.num_categories == 0 || spec.num_room_types == 0) {
    throw UsageError("generator spec must have at least one category and room type");
  }
  Rng rng(phi_seed(seed));
  PlantedTruth truth;
  const std::size_t u = spec.num_room_types;
  const std::size_t v = spec.num_categories;
  truth.phi.assign(u, std::vector<double>(v, 0.0));
  const std::size_t slice = (v + u - 1) / u;
  for (std::size_t t = 0; t < u; ++t) {
    auto& row = truth.phi[t];
    if (spec.disjoint_vocabulary) {
      // Decaying weights on the type's own slice; the slice head is the
      // unique top word.
      const std::size_t lo = t * slice;
      const std::size_t hi = std::min(lo + slice, v);
      for (std::size_t i = lo; i < hi; ++i) {
        row[i] = 1.0 / static_cast<double>(1 + (i - lo));
      }
    } else {
      // Dirichlet(1) sample via normalized exponentials.
      for (std::size_t i = 0; i < v; ++i) row[i] = -std::log(1.0 - rng.uniform());
    }
    double total = 0.0;
    for (double x : row) total += x;
    for (double& x : row) x /= total;
    // Substitute pair members split their combined mass evenly so the
    // per-room member choice leaves empirical frequencies on target.
    for (const auto& [a, b] : spec.substitute_pairs) {
      const double half = (row[a] + row[b]) / 2.0;
      row[a] = half;
      row[b] = half;
    }
  }
  return truth;
}

SyntheticCorpus generate_synthetic_corpus(std::uint64_t seed, const GeneratorSpec& spec) {
  SyntheticCorpus out;
  out.truth = planted_multinomials(seed, spec);
  Rng rng(seed);

  Corpus& corpus = out.corpus;
  for (std::size_t t = 0; t < spec.num_room_types; ++t) {
    corpus.room_types.intern("type" + std::to_string(t));
  }
  for (std::size_t i = 0; i < spec.num_categories; ++i) {
    corpus.categories.intern(category_name(i));
  }
  for (std::size_t f = 0; f < spec.num_material_families; ++f) {
    for (std::size_t k = 0; k < spec.materials_per_family; ++k) {
      corpus.materials.intern(material_name(f, k));
    }
  }
  const std::size_t num_materials = corpus.materials.size();

  // category -> material rule it participates in, if any
  std::vector<int> rule_of(spec.num_categories, -1);
  for (std::size_t r = 0; r < spec.material_rules.size(); ++r) {
    rule_of[spec.material_rules[r].a] = static_cast<int>(r);
    rule_of[spec.material_rules[r].b] = static_cast<int>(r);
  }

  const double side = std::sqrt(spec.floor_area);
  for (std::size_t t = 0; t < spec.num_room_types; ++t) {
    const auto& phi = out.truth.phi[t];
    for (std::size_t k = 0; k < spec.rooms_per_type; ++k) {
      RoomDocument room;
      room.room_id = "t" + std::to_string(t) + "_r" + std::to_string(k);
      room.labels = {corpus.room_types.name(t)};
      room.floor_area = spec.floor_area;

      // Per-room member choice for each substitute pair.
      std::vector<std::size_t> member(spec.substitute_pairs.size());
      for (std::size_t p = 0; p < spec.substitute_pairs.size(); ++p) {
        member[p] = rng.bernoulli(0.5) ? spec.substitute_pairs[p].first
                                       : spec.substitute_pairs[p].second;
      }

      double proportion = rng.normal(spec.target_occupation, spec.occupation_noise);
      proportion = std::clamp(proportion, 0.02, 0.95);
      const double area_each =
          proportion * spec.floor_area / static_cast<double>(spec.objects_per_room);

      // Per-room family choices for material rules.
      std::vector<std::size_t> rule_family(spec.material_rules.size());
      for (std::size_t r = 0; r < spec.material_rules.size(); ++r) {
        rule_family[r] = spec.material_rules[r].fixed_family >= 0
                             ? static_cast<std::size_t>(spec.material_rules[r].fixed_family)
                             : rng.uniform_index(spec.num_material_families);
      }

      for (std::size_t n = 0; n < spec.objects_per_room; ++n) {
        std::size_t cat = rng.discrete(phi);
        for (std::size_t p = 0; p < spec.substitute_pairs.size(); ++p) {
          if (cat == spec.substitute_pairs[p].first || cat == spec.substitute_pairs[p].second) {
            cat = member[p];
          }
        }
        ObjectInstance o;
        o.instance_id = room.room_id + "_o" + std::to_string(n);
        o.category = corpus.categories.name(cat);
        o.footprint_area = area_each;
        o.floor_contact = true;
        if (spec.with_positions) {
          o.position = std::array<double, 2>{rng.uniform(0.0, side), rng.uniform(0.0, side)};
        }
        std::size_t material;
        if (rule_of[cat] >= 0) {
          const std::size_t fam = rule_family[rule_of[cat]];
          material = fam * spec.materials_per_family + rng.uniform_index(spec.materials_per_family);
        } else {
          material = rng.uniform_index(num_materials);
        }
        ObjectPart part;
        part.label = "body";
        part.available_materials = corpus.materials.names();
        part.assigned_material = corpus.materials.name(material);
        o.parts.push_back(std::move(part));
        o.material_colors[corpus.materials.name(material)] = synthetic_material_color(
            material / spec.materials_per_family, material % spec.materials_per_family);
        room.objects.push_back(std::move(o));
      }

      // Pull companions next to their anchors.
      if (spec.with_positions) {
        for (const auto& rule : spec.adjacency_rules) {
          const std::string anchor_name = corpus.categories.name(rule.anchor);
          const std::string companion_name = corpus.categories.name(rule.companion);
          const ObjectInstance* anchor = nullptr;
          for (const auto& o : room.objects) {
            if (o.category == anchor_name) {
              anchor = &o;
              break;
            }
          }
          if (!anchor) continue;
          const std::array<double, 2> ap = *anchor->position;
          for (auto& o : room.objects) {
            if (o.category != companion_name) continue;
            const double r = rule.radius * std::sqrt(rng.uniform());
            const double angle = rng.uniform() * kTau;
            o.position = std::array<double, 2>{
                std::clamp(ap[0] + r * std::cos(angle), 0.0, side),
                std::clamp(ap[1] + r * std::sin(angle), 0.0, side)};
          }
        }
      }
      corpus.rooms.push_back(std::move(room));
    }
  }
  return out;
}

}  // namespace roomrec
