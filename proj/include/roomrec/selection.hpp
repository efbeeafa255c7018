#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "roomrec/catalog.hpp"
#include "roomrec/corpus.hpp"
#include "roomrec/group_model.hpp"
#include "roomrec/lists.hpp"
#include "roomrec/palette.hpp"

namespace roomrec {

struct CostWeights {
  double mu1 = 1.0 / 3.0;
  double mu2 = 1.0 / 3.0;
  double mu3 = 1.0 / 3.0;
  double xi = 1e-5;
  // Compute the style term as exp(-sum M) instead of 1 - exp(-sum M);
  // comparison mode only, it rewards mismatched styles when minimized.
  bool literal_style_term = false;
};

struct AnnealSchedule {
  double initial_temperature = 1.0;
  double decay = 0.97;  // geometric, in (0,1)
  std::size_t steps = 500;
  std::size_t moves_per_step = 50;
  std::uint64_t seed = 0;
};

// One selected instance: a catalog template plus a material index per part.
struct SelectedUnit {
  std::size_t template_index = 0;
  std::vector<std::size_t> material_choice;  // index into part's materials
};

struct RoomSelection {
  std::vector<int> counts;                        // per list entry
  std::vector<std::vector<SelectedUnit>> units;   // per list entry
};

struct CostBreakdown {
  double total = 0.0;
  double occupation = 0.0;  // G1
  double grouping = 0.0;    // G2
  double style = 0.0;       // G3
};

struct SelectionState {
  std::vector<RoomSelection> rooms;
  std::vector<double> occupation;        // cached g1 per room
  std::vector<double> palette_distance;  // cached M per room
  std::vector<double> grouping;          // cached per-room G2 contribution
  CostBreakdown cost;
};

// Read-only inputs of one optimization run.
struct SelectionProblem {
  Residence residence;
  std::vector<RecommendationList> lists;  // parallel to residence.rooms
  const Catalog* catalog = nullptr;
  const GroupModel* groups = nullptr;
  std::vector<OccupationPrior> priors;     // per room
  std::vector<Palette> target_palettes;    // per room
  CostWeights weights;
};

struct PlacedInstance {
  double footprint_area = 0.0;
  bool floor_contact = true;
  int count = 1;
};

// Floor-contact footprint over floor area; non-floor-contact instances are
// excluded.
double g1_occupation(std::span<const PlacedInstance> instances, double floor_area);

// Full recomputation of (G, G1, G2, G3) and the per-room caches.
CostBreakdown cost_G(const SelectionProblem& problem, SelectionState& state);

// Footprint-weighted top-5 material colors of the room's selection; false
// when the selection carries no materials.
bool room_palette(const SelectionProblem& problem, const RoomSelection& selection,
                  std::size_t room_index, Palette& out);

// Simulated annealing from a greedy occupancy-capped start; returns the
// best state ever visited. Deterministic given the schedule seed.
SelectionState optimize_selection(const SelectionProblem& problem,
                                  const AnnealSchedule& schedule);

// Exhaustive argmin of G; errors when the state space exceeds `cap`.
SelectionState brute_force_selection(const SelectionProblem& problem, double cap = 1e6);

// Number of enumerable states of the problem.
double count_states(const SelectionProblem& problem);

// Deterministic random state / random move, for property tests.
SelectionState random_state(const SelectionProblem& problem, std::uint64_t seed);

void save_selection(const SelectionProblem& problem, const SelectionState& state,
                    const std::string& path);

}  // namespace roomrec
