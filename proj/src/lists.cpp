#include "roomrec/lists.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "roomrec/json_io.hpp"
#include "roomrec/rng.hpp"

namespace roomrec {
namespace {

constexpr double kExhaustiveCap = 1e6;

double room_expectation(const RecommendationList& list, const ResidenceRoom& room,
                        const KnowledgeTable& knowledge) {
  return match_expectation(list, room.labels, knowledge);
}

}  // namespace

std::string label_set_key(std::vector<std::string> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  std::string key;
  for (const auto& l : labels) {
    if (!key.empty()) key += '+';
    key += l;
  }
  return key;
}

std::vector<RecommendationList> split_list(const RecommendationList& list,
                                           const EmbeddingSet& emb, double threshold) {
  if (threshold <= 0.0 || threshold > 1.0) {
    throw UsageError("split threshold must lie in (0,1]");
  }
  std::vector<RecommendationList> done;
  std::vector<RecommendationList> queue{list};
  std::size_t next_id = 0;
  while (!queue.empty()) {
    RecommendationList current = std::move(queue.back());
    queue.pop_back();
    bool split_here = false;
    for (std::size_t a = 0; a < current.entries.size() && !split_here; ++a) {
      for (std::size_t b = a + 1; b < current.entries.size() && !split_here; ++b) {
        const std::size_t i = emb.category_index(current.entries[a].category);
        const std::size_t j = emb.category_index(current.entries[b].category);
        if (emb.cooccurred(i, j)) continue;
        if (pairwise_similarity(emb, current.entries[a].category, current.entries[b].category) <
            threshold) {
          continue;
        }
        // Substitutes: one branch keeps a, the other keeps b.
        RecommendationList keep_a = current;
        keep_a.list_id = list.list_id + "/" + std::to_string(next_id++);
        keep_a.entries.erase(keep_a.entries.begin() + static_cast<std::ptrdiff_t>(b));
        RecommendationList keep_b = current;
        keep_b.list_id = list.list_id + "/" + std::to_string(next_id++);
        keep_b.entries.erase(keep_b.entries.begin() + static_cast<std::ptrdiff_t>(a));
        queue.push_back(std::move(keep_b));
        queue.push_back(std::move(keep_a));
        split_here = true;
      }
    }
    if (!split_here) done.push_back(std::move(current));
  }
  // Deterministic order regardless of the recursion pattern.
  std::sort(done.begin(), done.end(),
            [](const RecommendationList& x, const RecommendationList& y) {
              return x.list_id < y.list_id;
            });
  if (done.size() == 1) done[0].list_id = list.list_id;
  return done;
}

double match_expectation(const RecommendationList& list,
                         const std::vector<std::string>& room_types,
                         const KnowledgeTable& knowledge) {
  double expectation = 0.0;
  for (const auto& entry : list.entries) {
    double best = 0.0;
    bool found = false;
    for (const auto& type : room_types) {
      if (!knowledge.has(entry.category, type)) continue;
      best = found ? std::max(best, knowledge.score(entry.category, type))
                   : knowledge.score(entry.category, type);
      found = true;
    }
    if (!found) {
      throw IntegrityError("no knowledge score for (" + entry.category + ", " +
                           label_set_key(room_types) + ")");
    }
    expectation += entry.probability * best;
  }
  return expectation;
}

CandidateLists build_candidate_lists(const LldaModel& model,
                                     const std::vector<std::vector<std::string>>& label_sets,
                                     const EmbeddingSet& emb, const KnowledgeTable& knowledge,
                                     const CountPrior& priors, int top_k) {
  if (top_k < 1) throw UsageError("top_k must be >= 1");
  CandidateLists result;
  for (const auto& labels : label_sets) {
    const std::string key = label_set_key(labels);
    if (result.count(key)) continue;
    const std::vector<double> occurrence = hybrid_occurrence(model, labels);

    std::vector<std::size_t> order(model.vocab_size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return occurrence[a] > occurrence[b];
    });
    const std::size_t take = std::min<std::size_t>(top_k, order.size());

    RecommendationList base;
    base.list_id = key + "#0";
    base.room_types = labels;
    std::sort(base.room_types.begin(), base.room_types.end());
    for (std::size_t r = 0; r < take; ++r) {
      const std::size_t cat = order[r];
      ListEntry entry;
      entry.category = model.categories[cat];
      entry.probability = occurrence[cat];
      double score = 0.0;
      bool scored = false;
      int max_count = 0;
      for (const auto& type : labels) {
        if (knowledge.has(entry.category, type)) {
          score = scored ? std::max(score, knowledge.score(entry.category, type))
                         : knowledge.score(entry.category, type);
          scored = true;
        }
        auto ti = std::find(model.room_types.begin(), model.room_types.end(), type);
        if (ti != model.room_types.end()) {
          max_count = std::max(
              max_count, priors.at(cat, static_cast<std::size_t>(ti - model.room_types.begin())));
        }
      }
      if (!scored) {
        throw IntegrityError("no knowledge score for (" + entry.category + ", " + key + ")");
      }
      entry.count_hi = max_count;
      entry.count_lo = score <= 2.5 ? 0 : 1;
      if (entry.count_lo > entry.count_hi) entry.count_lo = entry.count_hi;
      base.entries.push_back(std::move(entry));
    }
    result[key] = split_list(base, emb, 0.95);
  }
  return result;
}

namespace {

struct AssignmentProblem {
  std::vector<const ResidenceRoom*> rooms;
  std::vector<const std::vector<RecommendationList>*> options;  // per room
  std::vector<std::vector<double>> expectation;                 // per room, per option
  std::vector<std::vector<std::size_t>> groups;  // room indices sharing a label set
  double lambda = 0.0;
};

// Objective of a full assignment (option index per room); returns false
// when the distinctness constraint is violated.
bool evaluate(const AssignmentProblem& p, const std::vector<std::size_t>& choice, double& h1,
              double& h2) {
  h1 = 0.0;
  h2 = 0.0;
  for (const auto& group : p.groups) {
    if (group.size() == 1 || p.lambda == 0.0) {
      // With lambda=0 the distinctness machinery is inert and every room
      // independently contributes its expectation (per-room argmax).
      for (std::size_t room : group) h1 += p.expectation[room][choice[room]];
      continue;
    }
    const std::size_t num_options = p.options[group[0]]->size();
    std::set<std::size_t> used;
    for (std::size_t room : group) {
      const bool fresh = used.insert(choice[room]).second;
      if (fresh) {
        h2 += p.expectation[room][choice[room]];
      } else if (p.lambda > 0.0 && num_options >= group.size()) {
        return false;  // enough lists exist; reuse is not admissible
      }
      // Forced reuse contributes 0 to H2.
    }
  }
  return true;
}

ListAssignment to_assignment(const AssignmentProblem& p, const std::vector<std::size_t>& choice) {
  ListAssignment out;
  double h1 = 0.0, h2 = 0.0;
  evaluate(p, choice, h1, h2);
  out.h1 = h1;
  out.h2 = h2;
  out.objective = h1 + p.lambda * h2;
  for (std::size_t r = 0; r < p.rooms.size(); ++r) {
    out.list_of_room[p.rooms[r]->room_id] = (*p.options[r])[choice[r]].list_id;
  }
  return out;
}

// Greedy baseline: per-room argmax with duplicates within a group resolved
// to the next-best unused list.
std::vector<std::size_t> greedy_choice(const AssignmentProblem& p) {
  std::vector<std::size_t> choice(p.rooms.size(), 0);
  for (const auto& group : p.groups) {
    std::set<std::size_t> used;
    for (std::size_t room : group) {
      const auto& e = p.expectation[room];
      std::size_t best = 0;
      bool found = false;
      for (std::size_t k = 0; k < e.size(); ++k) {
        if (p.lambda > 0.0 && group.size() > 1 && used.count(k) &&
            e.size() >= group.size()) {
          continue;
        }
        if (!found || e[k] > e[best]) {
          best = k;
          found = true;
        }
      }
      choice[room] = best;
      used.insert(best);
    }
  }
  return choice;
}

}  // namespace

ListAssignment assign_lists(const Residence& residence, const CandidateLists& candidates,
                            const KnowledgeTable& knowledge, double lambda, std::uint64_t seed) {
  if (residence.rooms.empty()) throw UsageError("residence has no rooms");
  if (lambda < 0.0) throw UsageError("lambda must be >= 0");

  AssignmentProblem p;
  p.lambda = lambda;
  std::map<std::string, std::size_t> group_of_key;
  double combinations = 1.0;
  for (const auto& room : residence.rooms) {
    const std::string key = label_set_key(room.labels);
    auto it = candidates.find(key);
    if (it == candidates.end() || it->second.empty()) {
      throw IntegrityError("room '" + room.room_id + "' (type " + key +
                           ") has no candidate lists");
    }
    const std::size_t r = p.rooms.size();
    p.rooms.push_back(&room);
    p.options.push_back(&it->second);
    std::vector<double> e;
    for (const auto& list : it->second) e.push_back(room_expectation(list, room, knowledge));
    p.expectation.push_back(std::move(e));
    combinations *= static_cast<double>(it->second.size());
    auto [gi, inserted] = group_of_key.emplace(key, p.groups.size());
    if (inserted) p.groups.emplace_back();
    p.groups[gi->second].push_back(r);
  }

  std::vector<std::size_t> best = greedy_choice(p);
  double best_h1 = 0.0, best_h2 = 0.0;
  evaluate(p, best, best_h1, best_h2);
  double best_obj = best_h1 + lambda * best_h2;

  if (combinations <= kExhaustiveCap) {
    std::vector<std::size_t> choice(p.rooms.size(), 0);
    while (true) {
      double h1 = 0.0, h2 = 0.0;
      if (evaluate(p, choice, h1, h2) && h1 + lambda * h2 > best_obj) {
        best_obj = h1 + lambda * h2;
        best = choice;
      }
      std::size_t r = 0;
      for (; r < choice.size(); ++r) {
        if (++choice[r] < p.options[r]->size()) break;
        choice[r] = 0;
      }
      if (r == choice.size()) break;
    }
  } else {
    // Seeded hill climb from the greedy start.
    Rng rng(seed);
    std::vector<std::size_t> current = best;
    double current_obj = best_obj;
    const std::size_t steps = 20000;
    for (std::size_t s = 0; s < steps; ++s) {
      const std::size_t r = rng.uniform_index(current.size());
      const std::size_t old = current[r];
      current[r] = rng.uniform_index(p.options[r]->size());
      double h1 = 0.0, h2 = 0.0;
      if (evaluate(p, current, h1, h2) && h1 + lambda * h2 >= current_obj) {
        current_obj = h1 + lambda * h2;
        if (current_obj > best_obj) {
          best_obj = current_obj;
          best = current;
        }
      } else {
        current[r] = old;
      }
    }
  }
  return to_assignment(p, best);
}

Residence load_residence(const std::string& path) {
  const nlohmann::json doc = load_json_file(path);
  check_schema(doc, "floor plan " + path);
  Residence residence;
  for (const auto& rj : doc.at("rooms")) {
    ResidenceRoom room;
    room.room_id = rj.at("room_id").get<std::string>();
    for (const auto& l : rj.at("labels")) room.labels.push_back(l.get<std::string>());
    if (room.labels.empty()) {
      throw IntegrityError("floor plan room '" + room.room_id + "' has no labels");
    }
    room.floor_area = rj.at("floor_area").get<double>();
    if (room.floor_area <= 0.0) {
      throw IntegrityError("floor plan room '" + room.room_id + "' has non-positive floor_area");
    }
    residence.rooms.push_back(std::move(room));
  }
  if (residence.rooms.empty()) throw IntegrityError("floor plan " + path + " has no rooms");
  return residence;
}

void save_residence(const Residence& residence, const std::string& path) {
  nlohmann::json doc;
  doc["schema_version"] = kSchemaMajor;
  nlohmann::json rooms = nlohmann::json::array();
  for (const auto& room : residence.rooms) {
    rooms.push_back({{"room_id", room.room_id},
                     {"labels", room.labels},
                     {"floor_area", room.floor_area}});
  }
  doc["rooms"] = std::move(rooms);
  save_json_file(doc, path);
}

namespace {

nlohmann::json dump_list(const RecommendationList& list) {
  nlohmann::json lj;
  lj["list_id"] = list.list_id;
  lj["room_types"] = list.room_types;
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : list.entries) {
    entries.push_back({{"category", e.category},
                       {"probability", e.probability},
                       {"count", {e.count_lo, e.count_hi}}});
  }
  lj["entries"] = std::move(entries);
  return lj;
}

RecommendationList parse_list(const nlohmann::json& lj) {
  RecommendationList list;
  list.list_id = lj.at("list_id").get<std::string>();
  for (const auto& t : lj.at("room_types")) list.room_types.push_back(t.get<std::string>());
  for (const auto& ej : lj.at("entries")) {
    ListEntry e;
    e.category = ej.at("category").get<std::string>();
    e.probability = ej.at("probability").get<double>();
    e.count_lo = ej.at("count")[0].get<int>();
    e.count_hi = ej.at("count")[1].get<int>();
    if (e.count_lo > e.count_hi || e.count_lo < 0) {
      throw IntegrityError("list '" + list.list_id + "': bad count bounds for '" + e.category +
                           "'");
    }
    list.entries.push_back(std::move(e));
  }
  return list;
}

}  // namespace

RoomLists load_room_lists(const std::string& path) {
  const nlohmann::json doc = load_json_file(path);
  check_schema(doc, "lists " + path);
  RoomLists lists;
  lists.objective = doc.value("objective", 0.0);
  lists.h1 = doc.value("h1", 0.0);
  lists.h2 = doc.value("h2", 0.0);
  for (const auto& rj : doc.at("rooms")) {
    ResidenceRoom room;
    room.room_id = rj.at("room_id").get<std::string>();
    for (const auto& l : rj.at("labels")) room.labels.push_back(l.get<std::string>());
    room.floor_area = rj.at("floor_area").get<double>();
    lists.list_of_room[room.room_id] = parse_list(rj.at("list"));
    lists.residence.rooms.push_back(std::move(room));
  }
  return lists;
}

void save_room_lists(const RoomLists& lists, const std::string& path) {
  nlohmann::json doc;
  doc["schema_version"] = kSchemaMajor;
  doc["objective"] = lists.objective;
  doc["h1"] = lists.h1;
  doc["h2"] = lists.h2;
  nlohmann::json rooms = nlohmann::json::array();
  for (const auto& room : lists.residence.rooms) {
    nlohmann::json rj;
    rj["room_id"] = room.room_id;
    rj["labels"] = room.labels;
    rj["floor_area"] = room.floor_area;
    rj["list"] = dump_list(lists.list_of_room.at(room.room_id));
    rooms.push_back(std::move(rj));
  }
  doc["rooms"] = std::move(rooms);
  save_json_file(doc, path);
}

}  // namespace roomrec
