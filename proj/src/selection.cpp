#include "roomrec/selection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "roomrec/json_io.hpp"
#include "roomrec/rng.hpp"

namespace roomrec {
namespace {

struct UnitRef {
  const CatalogTemplate* tmpl;
  const SelectedUnit* unit;
};

std::vector<UnitRef> flatten_room(const SelectionProblem& problem, const RoomSelection& room,
                                  std::size_t room_index) {
  std::vector<UnitRef> refs;
  const auto& list = problem.lists[room_index];
  for (std::size_t e = 0; e < list.entries.size(); ++e) {
    const auto& templates = problem.catalog->templates(list.entries[e].category);
    for (const auto& unit : room.units[e]) {
      refs.push_back({&templates[unit.template_index], &unit});
    }
  }
  return refs;
}

double room_g1(const SelectionProblem& problem, const RoomSelection& room,
               std::size_t room_index) {
  double covered = 0.0;
  const auto& list = problem.lists[room_index];
  for (std::size_t e = 0; e < list.entries.size(); ++e) {
    const auto& templates = problem.catalog->templates(list.entries[e].category);
    for (const auto& unit : room.units[e]) {
      const auto& t = templates[unit.template_index];
      if (t.floor_contact) covered += t.footprint_area;
    }
  }
  return covered / problem.residence.rooms[room_index].floor_area;
}

// Mean of the pairwise group rule over all part pairs of two units.
double unit_g2(const SelectionProblem& problem, const UnitRef& a, const UnitRef& b) {
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t pa = 0; pa < a.tmpl->parts.size(); ++pa) {
    const std::string& ma = a.tmpl->parts[pa].materials[a.unit->material_choice[pa]];
    for (std::size_t pb = 0; pb < b.tmpl->parts.size(); ++pb) {
      const std::string& mb = b.tmpl->parts[pb].materials[b.unit->material_choice[pb]];
      sum += g2_pair(*problem.groups, a.tmpl->category, a.tmpl->parts[pa].label, ma,
                     b.tmpl->category, b.tmpl->parts[pb].label, mb);
      ++pairs;
    }
  }
  return pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);
}

double room_grouping(const SelectionProblem& problem, const RoomSelection& room,
                     std::size_t room_index) {
  const std::vector<UnitRef> refs = flatten_room(problem, room, room_index);
  const std::size_t n = refs.size();
  if (n < 2) return 0.0;
  // Union-find over spatially associated category pairs.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (problem.groups->grouped(refs[i].tmpl->category, refs[j].tmpl->category)) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::vector<std::size_t> size(n, 0);
  for (std::size_t i = 0; i < n; ++i) ++size[find(i)];

  double total = 0.0;
  const double xi = problem.weights.xi;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t root = find(i);
      if (root != find(j)) continue;
      const double nk = static_cast<double>(size[root]);
      if (nk < 2.0) continue;
      total -= 2.0 * std::log(unit_g2(problem, refs[i], refs[j]) + xi) / (nk * (nk - 1.0));
    }
  }
  return total;
}

double room_palette_distance(const SelectionProblem& problem, const RoomSelection& room,
                             std::size_t room_index) {
  Palette achieved;
  if (!room_palette(problem, room, room_index, achieved)) return 0.0;
  return palette_distance(problem.target_palettes[room_index], achieved);
}

CostBreakdown combine(const SelectionProblem& problem, const std::vector<double>& g1,
                      const std::vector<double>& grouping, double palette_sum) {
  CostBreakdown cost;
  const double n_r = static_cast<double>(problem.residence.rooms.size());
  for (std::size_t r = 0; r < g1.size(); ++r) {
    const double dev = g1[r] - problem.priors[r].delta;
    cost.occupation += dev * dev;
  }
  cost.occupation /= 2.0 * n_r;
  cost.grouping = std::accumulate(grouping.begin(), grouping.end(), 0.0);
  cost.style = problem.weights.literal_style_term ? std::exp(-palette_sum)
                                                  : 1.0 - std::exp(-palette_sum);
  cost.total = problem.weights.mu1 * cost.occupation + problem.weights.mu2 * cost.grouping +
               problem.weights.mu3 * cost.style;
  return cost;
}

void validate_problem(const SelectionProblem& problem) {
  const std::size_t n = problem.residence.rooms.size();
  if (problem.lists.size() != n || problem.priors.size() != n ||
      problem.target_palettes.size() != n) {
    throw UsageError("selection problem arrays must parallel the residence rooms");
  }
  if (!problem.catalog || !problem.groups) {
    throw UsageError("selection problem requires a catalog and a group model");
  }
  for (std::size_t r = 0; r < n; ++r) {
    double lower_bound_area = 0.0;
    for (const auto& entry : problem.lists[r].entries) {
      const auto& templates = problem.catalog->templates(entry.category);
      double min_area = std::numeric_limits<double>::infinity();
      for (const auto& t : templates) {
        min_area = std::min(min_area, t.floor_contact ? t.footprint_area : 0.0);
      }
      lower_bound_area += entry.count_lo * min_area;
    }
    if (lower_bound_area > problem.residence.rooms[r].floor_area) {
      throw IntegrityError("room '" + problem.residence.rooms[r].room_id +
                           "': lower-bound footprints exceed the floor area");
    }
  }
}

SelectedUnit sample_unit(const SelectionProblem& problem, const ListEntry& entry, Rng& rng) {
  const auto& templates = problem.catalog->templates(entry.category);
  SelectedUnit unit;
  unit.template_index = rng.uniform_index(templates.size());
  for (const auto& part : templates[unit.template_index].parts) {
    unit.material_choice.push_back(rng.uniform_index(part.materials.size()));
  }
  return unit;
}

SelectionState empty_state(const SelectionProblem& problem) {
  SelectionState state;
  const std::size_t n = problem.residence.rooms.size();
  state.rooms.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    state.rooms[r].counts.assign(problem.lists[r].entries.size(), 0);
    state.rooms[r].units.resize(problem.lists[r].entries.size());
  }
  state.occupation.assign(n, 0.0);
  state.palette_distance.assign(n, 0.0);
  state.grouping.assign(n, 0.0);
  return state;
}

// All (template, material) combinations for one list entry.
std::vector<SelectedUnit> entry_combos(const SelectionProblem& problem, const ListEntry& entry) {
  std::vector<SelectedUnit> combos;
  const auto& templates = problem.catalog->templates(entry.category);
  for (std::size_t t = 0; t < templates.size(); ++t) {
    std::vector<std::size_t> choice(templates[t].parts.size(), 0);
    while (true) {
      combos.push_back({t, choice});
      std::size_t p = 0;
      for (; p < choice.size(); ++p) {
        if (++choice[p] < templates[t].parts[p].materials.size()) break;
        choice[p] = 0;
      }
      if (p == choice.size()) break;
    }
  }
  return combos;
}

}  // namespace

double g1_occupation(std::span<const PlacedInstance> instances, double floor_area) {
  if (floor_area <= 0.0) throw UsageError("floor area must be > 0");
  double covered = 0.0;
  for (const auto& inst : instances) {
    if (inst.floor_contact) covered += inst.count * inst.footprint_area;
  }
  return covered / floor_area;
}

bool room_palette(const SelectionProblem& problem, const RoomSelection& room,
                  std::size_t room_index, Palette& out) {
  std::map<std::string, double> weight;
  const auto& list = problem.lists[room_index];
  for (std::size_t e = 0; e < list.entries.size(); ++e) {
    const auto& templates = problem.catalog->templates(list.entries[e].category);
    for (const auto& unit : room.units[e]) {
      const auto& t = templates[unit.template_index];
      for (std::size_t p = 0; p < t.parts.size(); ++p) {
        weight[t.parts[p].materials[unit.material_choice[p]]] += t.footprint_area;
      }
    }
  }
  if (weight.empty()) return false;
  std::vector<std::pair<std::string, double>> ranked(weight.begin(), weight.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (std::size_t i = 0; i < 5; ++i) {
    // Fewer than five materials: the heaviest one fills the open slots.
    const auto& material = ranked[i < ranked.size() ? i : 0].first;
    out.colors[i] = problem.catalog->material(material).color;
  }
  out = canonical_palette(out);
  return true;
}

CostBreakdown cost_G(const SelectionProblem& problem, SelectionState& state) {
  validate_problem(problem);
  const std::size_t n = problem.residence.rooms.size();
  state.occupation.resize(n);
  state.palette_distance.resize(n);
  state.grouping.resize(n);
  double palette_sum = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    state.occupation[r] = room_g1(problem, state.rooms[r], r);
    state.palette_distance[r] = room_palette_distance(problem, state.rooms[r], r);
    state.grouping[r] = room_grouping(problem, state.rooms[r], r);
    palette_sum += state.palette_distance[r];
  }
  state.cost = combine(problem, state.occupation, state.grouping, palette_sum);
  return state.cost;
}

double count_states(const SelectionProblem& problem) {
  double total = 1.0;
  for (std::size_t r = 0; r < problem.residence.rooms.size(); ++r) {
    for (const auto& entry : problem.lists[r].entries) {
      double combos = 0.0;
      for (const auto& t : problem.catalog->templates(entry.category)) {
        double per_template = 1.0;
        for (const auto& part : t.parts) {
          per_template *= static_cast<double>(part.materials.size());
        }
        combos += per_template;
      }
      double entry_states = 0.0;
      for (int c = entry.count_lo; c <= entry.count_hi; ++c) {
        entry_states += std::pow(combos, c);
      }
      total *= entry_states;
    }
  }
  return total;
}

SelectionState random_state(const SelectionProblem& problem, std::uint64_t seed) {
  validate_problem(problem);
  Rng rng(seed);
  SelectionState state = empty_state(problem);
  for (std::size_t r = 0; r < state.rooms.size(); ++r) {
    auto& room = state.rooms[r];
    const auto& entries = problem.lists[r].entries;
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const int span = entries[e].count_hi - entries[e].count_lo + 1;
      room.counts[e] = entries[e].count_lo +
                       static_cast<int>(rng.uniform_index(static_cast<std::size_t>(span)));
      for (int c = 0; c < room.counts[e]; ++c) {
        room.units[e].push_back(sample_unit(problem, entries[e], rng));
      }
    }
  }
  cost_G(problem, state);
  return state;
}

namespace {

SelectionState greedy_initial_state(const SelectionProblem& problem, Rng& rng) {
  SelectionState state = empty_state(problem);
  for (std::size_t r = 0; r < state.rooms.size(); ++r) {
    auto& room = state.rooms[r];
    const auto& entries = problem.lists[r].entries;
    for (std::size_t e = 0; e < entries.size(); ++e) {
      for (int c = 0; c < entries[e].count_lo; ++c) {
        room.units[e].push_back(sample_unit(problem, entries[e], rng));
        ++room.counts[e];
      }
    }
    // Fill by occurrence probability until the occupation headroom
    // (delta + 2 sigma) is spent.
    const double cap = problem.priors[r].delta + 2.0 * problem.priors[r].sigma;
    std::vector<char> open(entries.size(), 1);
    while (true) {
      std::vector<double> weights(entries.size(), 0.0);
      bool any = false;
      for (std::size_t e = 0; e < entries.size(); ++e) {
        if (open[e] && room.counts[e] < entries[e].count_hi) {
          weights[e] = std::max(entries[e].probability, 1e-12);
          any = true;
        }
      }
      if (!any) break;
      const std::size_t e = rng.discrete(weights);
      room.units[e].push_back(sample_unit(problem, entries[e], rng));
      ++room.counts[e];
      if (room_g1(problem, room, r) > cap) {
        room.units[e].pop_back();
        --room.counts[e];
        open[e] = 0;  // no space left for this category
      }
    }
  }
  cost_G(problem, state);
  return state;
}

struct MoveOutcome {
  std::size_t room = 0;
  RoomSelection selection;  // proposed replacement for that room
  bool valid = false;
};

MoveOutcome propose_move(const SelectionProblem& problem, const SelectionState& state, Rng& rng) {
  MoveOutcome out;
  out.room = rng.uniform_index(state.rooms.size());
  const auto& entries = problem.lists[out.room].entries;
  const RoomSelection& room = state.rooms[out.room];

  enum Move { kIncrement, kDecrement, kSwapTemplate, kChangeMaterial };
  std::vector<Move> feasible;
  bool can_swap = false, can_material = false;
  for (std::size_t e = 0; e < entries.size(); ++e) {
    if (room.counts[e] < entries[e].count_hi &&
        std::find(feasible.begin(), feasible.end(), kIncrement) == feasible.end()) {
      feasible.push_back(kIncrement);
    }
    if (room.counts[e] > entries[e].count_lo &&
        std::find(feasible.begin(), feasible.end(), kDecrement) == feasible.end()) {
      feasible.push_back(kDecrement);
    }
    const auto& templates = problem.catalog->templates(entries[e].category);
    if (!room.units[e].empty() && templates.size() >= 2) can_swap = true;
    for (const auto& unit : room.units[e]) {
      const auto& t = templates[unit.template_index];
      for (const auto& part : t.parts) {
        if (part.materials.size() >= 2) can_material = true;
      }
    }
  }
  if (can_swap) feasible.push_back(kSwapTemplate);
  if (can_material) feasible.push_back(kChangeMaterial);
  if (feasible.empty()) return out;

  out.selection = room;
  switch (feasible[rng.uniform_index(feasible.size())]) {
    case kIncrement: {
      std::vector<std::size_t> open;
      for (std::size_t e = 0; e < entries.size(); ++e) {
        if (room.counts[e] < entries[e].count_hi) open.push_back(e);
      }
      const std::size_t e = open[rng.uniform_index(open.size())];
      out.selection.units[e].push_back(sample_unit(problem, entries[e], rng));
      ++out.selection.counts[e];
      break;
    }
    case kDecrement: {
      std::vector<std::size_t> open;
      for (std::size_t e = 0; e < entries.size(); ++e) {
        if (room.counts[e] > entries[e].count_lo && room.counts[e] > 0) open.push_back(e);
      }
      const std::size_t e = open[rng.uniform_index(open.size())];
      const std::size_t victim = rng.uniform_index(out.selection.units[e].size());
      out.selection.units[e].erase(out.selection.units[e].begin() +
                                   static_cast<std::ptrdiff_t>(victim));
      --out.selection.counts[e];
      break;
    }
    case kSwapTemplate: {
      std::vector<std::pair<std::size_t, std::size_t>> targets;
      for (std::size_t e = 0; e < entries.size(); ++e) {
        if (problem.catalog->templates(entries[e].category).size() < 2) continue;
        for (std::size_t u = 0; u < room.units[e].size(); ++u) targets.push_back({e, u});
      }
      const auto [e, u] = targets[rng.uniform_index(targets.size())];
      const auto& templates = problem.catalog->templates(entries[e].category);
      SelectedUnit& unit = out.selection.units[e][u];
      std::size_t next = rng.uniform_index(templates.size() - 1);
      if (next >= unit.template_index) ++next;
      unit.template_index = next;
      unit.material_choice.clear();
      for (const auto& part : templates[next].parts) {
        unit.material_choice.push_back(rng.uniform_index(part.materials.size()));
      }
      break;
    }
    case kChangeMaterial: {
      std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> targets;
      for (std::size_t e = 0; e < entries.size(); ++e) {
        const auto& templates = problem.catalog->templates(entries[e].category);
        for (std::size_t u = 0; u < room.units[e].size(); ++u) {
          const auto& t = templates[room.units[e][u].template_index];
          for (std::size_t p = 0; p < t.parts.size(); ++p) {
            if (t.parts[p].materials.size() >= 2) targets.push_back({e, u, p});
          }
        }
      }
      const auto [e, u, p] = targets[rng.uniform_index(targets.size())];
      const auto& templates = problem.catalog->templates(entries[e].category);
      SelectedUnit& unit = out.selection.units[e][u];
      const std::size_t options = templates[unit.template_index].parts[p].materials.size();
      std::size_t next = rng.uniform_index(options - 1);
      if (next >= unit.material_choice[p]) ++next;
      unit.material_choice[p] = next;
      break;
    }
  }
  out.valid = true;
  return out;
}

}  // namespace

SelectionState optimize_selection(const SelectionProblem& problem,
                                  const AnnealSchedule& schedule) {
  validate_problem(problem);
  if (schedule.decay <= 0.0 || schedule.decay >= 1.0 || schedule.steps < 1) {
    throw UsageError("annealing schedule needs decay in (0,1) and steps >= 1");
  }
  Rng rng(schedule.seed);
  SelectionState state = greedy_initial_state(problem, rng);
  SelectionState best = state;

  double palette_sum = 0.0;
  for (double m : state.palette_distance) palette_sum += m;
  const double n_r = static_cast<double>(problem.residence.rooms.size());

  double temperature = schedule.initial_temperature;
  for (std::size_t step = 0; step < schedule.steps; ++step) {
    for (std::size_t m = 0; m < schedule.moves_per_step; ++m) {
      MoveOutcome move = propose_move(problem, state, rng);
      if (!move.valid) continue;
      const std::size_t r = move.room;
      const double g1_new = room_g1(problem, move.selection, r);
      const double m_new = room_palette_distance(problem, move.selection, r);
      const double g2_new = room_grouping(problem, move.selection, r);

      const double dev_old = state.occupation[r] - problem.priors[r].delta;
      const double dev_new = g1_new - problem.priors[r].delta;
      CostBreakdown cost = state.cost;
      cost.occupation += (dev_new * dev_new - dev_old * dev_old) / (2.0 * n_r);
      cost.grouping += g2_new - state.grouping[r];
      const double palette_sum_new = palette_sum + m_new - state.palette_distance[r];
      cost.style = problem.weights.literal_style_term ? std::exp(-palette_sum_new)
                                                      : 1.0 - std::exp(-palette_sum_new);
      cost.total = problem.weights.mu1 * cost.occupation +
                   problem.weights.mu2 * cost.grouping + problem.weights.mu3 * cost.style;

      const double delta = cost.total - state.cost.total;
      if (delta <= 0.0 || rng.uniform() < std::exp(-delta / temperature)) {
        state.rooms[r] = std::move(move.selection);
        state.occupation[r] = g1_new;
        state.palette_distance[r] = m_new;
        state.grouping[r] = g2_new;
        state.cost = cost;
        palette_sum = palette_sum_new;
        if (state.cost.total < best.cost.total) best = state;
      }
    }
    temperature *= schedule.decay;
  }
  return best;
}

SelectionState brute_force_selection(const SelectionProblem& problem, double cap) {
  validate_problem(problem);
  const double states = count_states(problem);
  if (states > cap) {
    throw UsageError("state space has " + std::to_string(states) +
                     " states, above the cap of " + std::to_string(cap));
  }

  const std::size_t n = problem.residence.rooms.size();
  std::vector<std::vector<std::vector<SelectedUnit>>> combos(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (const auto& entry : problem.lists[r].entries) {
      combos[r].push_back(entry_combos(problem, entry));
    }
  }

  SelectionState current = empty_state(problem);
  SelectionState best;
  double best_cost = std::numeric_limits<double>::infinity();

  // Depth-first over (room, entry): choose a count, then a combo per unit.
  const std::function<void(std::size_t, std::size_t)> visit = [&](std::size_t r,
                                                                  std::size_t e) {
    if (r == n) {
      cost_G(problem, current);
      if (current.cost.total < best_cost) {
        best_cost = current.cost.total;
        best = current;
      }
      return;
    }
    if (e == problem.lists[r].entries.size()) {
      visit(r + 1, 0);
      return;
    }
    const auto& entry = problem.lists[r].entries[e];
    auto& units = current.rooms[r].units[e];
    const std::function<void(int)> fill = [&](int remaining) {
      if (remaining == 0) {
        current.rooms[r].counts[e] = static_cast<int>(units.size());
        visit(r, e + 1);
        return;
      }
      for (const auto& combo : combos[r][e]) {
        units.push_back(combo);
        fill(remaining - 1);
        units.pop_back();
      }
    };
    for (int c = entry.count_lo; c <= entry.count_hi; ++c) fill(c);
  };
  visit(0, 0);
  cost_G(problem, best);
  return best;
}

void save_selection(const SelectionProblem& problem, const SelectionState& state,
                    const std::string& path) {
  nlohmann::json doc;
  doc["schema_version"] = kSchemaMajor;
  doc["cost"] = {{"total", state.cost.total},
                 {"occupation", state.cost.occupation},
                 {"grouping", state.cost.grouping},
                 {"style", state.cost.style}};
  nlohmann::json rooms = nlohmann::json::array();
  for (std::size_t r = 0; r < problem.residence.rooms.size(); ++r) {
    nlohmann::json rj;
    rj["room_id"] = problem.residence.rooms[r].room_id;
    rj["labels"] = problem.residence.rooms[r].labels;
    rj["g1"] = state.occupation[r];
    rj["delta"] = problem.priors[r].delta;
    rj["sigma"] = problem.priors[r].sigma;
    rj["palette_distance"] = state.palette_distance[r];
    nlohmann::json target = nlohmann::json::array();
    for (const auto& c : problem.target_palettes[r].colors) target.push_back({c.h, c.s, c.v});
    rj["target_palette"] = std::move(target);
    Palette achieved;
    if (room_palette(problem, state.rooms[r], r, achieved)) {
      nlohmann::json pj = nlohmann::json::array();
      for (const auto& c : achieved.colors) pj.push_back({c.h, c.s, c.v});
      rj["room_palette"] = std::move(pj);
    }
    nlohmann::json objects = nlohmann::json::array();
    const auto& entries = problem.lists[r].entries;
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const auto& templates = problem.catalog->templates(entries[e].category);
      for (const auto& unit : state.rooms[r].units[e]) {
        const auto& t = templates[unit.template_index];
        nlohmann::json materials;
        for (std::size_t p = 0; p < t.parts.size(); ++p) {
          materials[t.parts[p].label] = t.parts[p].materials[unit.material_choice[p]];
        }
        objects.push_back({{"template_id", t.template_id},
                           {"category", t.category},
                           {"materials", std::move(materials)}});
      }
    }
    rj["objects"] = std::move(objects);
    rooms.push_back(std::move(rj));
  }
  doc["rooms"] = std::move(rooms);
  save_json_file(doc, path);
}

}  // namespace roomrec
