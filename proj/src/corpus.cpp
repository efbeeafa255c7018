#include "roomrec/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "roomrec/json_io.hpp"

namespace roomrec {
namespace {

using nlohmann::json;

HsvColor parse_hsv(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) {
    throw ParseError(where + ": color must be a [h,s,v] triple");
  }
  HsvColor c{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  if (c.h < 0.0 || c.h > 1.0 || c.s < 0.0 || c.s > 1.0 || c.v < 0.0 || c.v > 1.0) {
    throw IntegrityError(where + ": HSV channels must lie in [0,1]");
  }
  return c;
}

json dump_hsv(const HsvColor& c) { return json::array({c.h, c.s, c.v}); }

ObjectInstance parse_object(const json& j, const std::string& room_id) {
  ObjectInstance o;
  o.instance_id = j.at("instance_id").get<std::string>();
  const std::string where = "room '" + room_id + "', object '" + o.instance_id + "'";
  o.category = j.at("category").get<std::string>();
  o.footprint_area = j.at("footprint_area").get<double>();
  if (o.footprint_area < 0.0) {
    throw IntegrityError(where + ": negative footprint_area");
  }
  o.floor_contact = j.value("floor_contact", true);
  if (j.contains("position")) {
    const auto& p = j["position"];
    if (!p.is_array() || p.size() != 2) {
      throw ParseError(where + ": position must be a [x,y] pair");
    }
    o.position = std::array<double, 2>{p[0].get<double>(), p[1].get<double>()};
  }
  for (const auto& pj : j.value("parts", json::array())) {
    ObjectPart part;
    part.label = pj.at("label").get<std::string>();
    for (const auto& m : pj.at("available_materials")) {
      part.available_materials.push_back(m.get<std::string>());
    }
    if (pj.contains("assigned_material") && !pj["assigned_material"].is_null()) {
      part.assigned_material = pj["assigned_material"].get<std::string>();
      if (std::find(part.available_materials.begin(), part.available_materials.end(),
                    *part.assigned_material) == part.available_materials.end()) {
        throw IntegrityError(where + ", part '" + part.label + "': assigned material '" +
                             *part.assigned_material + "' not in available_materials");
      }
    }
    o.parts.push_back(std::move(part));
  }
  if (j.contains("material_colors")) {
    for (const auto& [name, value] : j["material_colors"].items()) {
      o.material_colors[name] = parse_hsv(value, where);
    }
  }
  return o;
}

}  // namespace

bool KnowledgeTable::has(const std::string& category, const std::string& room_type) const {
  auto ci = std::find(categories.begin(), categories.end(), category);
  auto ri = std::find(room_types.begin(), room_types.end(), room_type);
  return ci != categories.end() && ri != room_types.end();
}

double KnowledgeTable::score(const std::string& category, const std::string& room_type) const {
  auto ci = std::find(categories.begin(), categories.end(), category);
  auto ri = std::find(room_types.begin(), room_types.end(), room_type);
  if (ci == categories.end() || ri == room_types.end()) {
    throw IntegrityError("no knowledge score for (" + category + ", " + room_type + ")");
  }
  return scores[(ci - categories.begin()) * room_types.size() + (ri - room_types.begin())];
}

static Corpus parse_corpus(const json& doc);

Corpus load_corpus(const std::string& path) {
  const json doc = load_json_file(path);
  check_schema(doc, "corpus " + path);
  try {
    return parse_corpus(doc);
  } catch (const json::exception& e) {
    throw ParseError("corpus " + path + ": " + e.what());
  }
}

static Corpus parse_corpus(const json& doc) {
  Corpus corpus;
  for (const auto& name : doc.at("room_types")) corpus.room_types.intern(name.get<std::string>());
  for (const auto& name : doc.at("categories")) corpus.categories.intern(name.get<std::string>());
  for (const auto& name : doc.at("materials")) corpus.materials.intern(name.get<std::string>());

  std::set<std::string> seen_rooms;
  for (const auto& rj : doc.at("rooms")) {
    RoomDocument room;
    room.room_id = rj.at("room_id").get<std::string>();
    if (!seen_rooms.insert(room.room_id).second) {
      throw IntegrityError("duplicate room_id '" + room.room_id + "'");
    }
    room.floor_area = rj.at("floor_area").get<double>();
    if (room.floor_area <= 0.0) {
      throw IntegrityError("room '" + room.room_id + "': floor_area must be > 0");
    }
    for (const auto& l : rj.at("labels")) {
      const std::string label = l.get<std::string>();
      if (!corpus.room_types.contains(label)) {
        throw IntegrityError("room '" + room.room_id + "': unknown room type '" + label + "'");
      }
      if (std::find(room.labels.begin(), room.labels.end(), label) == room.labels.end()) {
        room.labels.push_back(label);
      }
    }
    if (room.labels.empty()) {
      throw IntegrityError("room '" + room.room_id + "': label list is empty");
    }
    for (const auto& oj : rj.at("objects")) {
      ObjectInstance o = parse_object(oj, room.room_id);
      if (!corpus.categories.contains(o.category)) {
        throw IntegrityError("room '" + room.room_id + "', object '" + o.instance_id +
                             "': unknown category '" + o.category + "'");
      }
      for (const auto& part : o.parts) {
        for (const auto& m : part.available_materials) {
          if (!corpus.materials.contains(m)) {
            throw IntegrityError("room '" + room.room_id + "', object '" + o.instance_id +
                                 "': unknown material '" + m + "'");
          }
        }
      }
      for (const auto& [m, c] : o.material_colors) {
        (void)c;
        if (!corpus.materials.contains(m)) {
          throw IntegrityError("room '" + room.room_id + "', object '" + o.instance_id +
                               "': unknown material '" + m + "' in material_colors");
        }
      }
      room.objects.push_back(std::move(o));
    }
    corpus.rooms.push_back(std::move(room));
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  json doc;
  doc["schema_version"] = kSchemaMajor;
  doc["room_types"] = corpus.room_types.names();
  doc["categories"] = corpus.categories.names();
  doc["materials"] = corpus.materials.names();
  json rooms = json::array();
  for (const auto& room : corpus.rooms) {
    json rj;
    rj["room_id"] = room.room_id;
    rj["labels"] = room.labels;
    rj["floor_area"] = room.floor_area;
    json objects = json::array();
    for (const auto& o : room.objects) {
      json oj;
      oj["instance_id"] = o.instance_id;
      oj["category"] = o.category;
      oj["footprint_area"] = o.footprint_area;
      oj["floor_contact"] = o.floor_contact;
      if (o.position) oj["position"] = json::array({(*o.position)[0], (*o.position)[1]});
      json parts = json::array();
      for (const auto& part : o.parts) {
        json pj;
        pj["label"] = part.label;
        pj["available_materials"] = part.available_materials;
        if (part.assigned_material) pj["assigned_material"] = *part.assigned_material;
        parts.push_back(std::move(pj));
      }
      if (!parts.empty()) oj["parts"] = std::move(parts);
      if (!o.material_colors.empty()) {
        json colors;
        for (const auto& [m, c] : o.material_colors) colors[m] = dump_hsv(c);
        oj["material_colors"] = std::move(colors);
      }
      objects.push_back(std::move(oj));
    }
    rj["objects"] = std::move(objects);
    rooms.push_back(std::move(rj));
  }
  doc["rooms"] = std::move(rooms);
  save_json_file(doc, path);
}

KnowledgeTable load_knowledge(const std::string& path) {
  const json doc = load_json_file(path);
  check_schema(doc, "knowledge " + path);
  KnowledgeTable table;
  try {
    for (const auto& n : doc.at("room_types")) table.room_types.push_back(n.get<std::string>());
    for (const auto& n : doc.at("categories")) table.categories.push_back(n.get<std::string>());
    const auto& rows = doc.at("scores");
    if (rows.size() != table.categories.size()) {
      throw ParseError("knowledge " + path + ": scores row count != categories");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != table.room_types.size()) {
        throw ParseError("knowledge " + path + ": row '" + table.categories[i] +
                         "' has wrong column count");
      }
      for (const auto& v : rows[i]) {
        const double s = v.get<double>();
        if (s < 0.0 || s > 5.0) {
          throw IntegrityError("knowledge " + path + ": score " + std::to_string(s) +
                               " outside [0,5] for category '" + table.categories[i] + "'");
        }
        table.scores.push_back(s);
      }
    }
  } catch (const json::exception& e) {
    throw ParseError("knowledge " + path + ": " + e.what());
  }
  return table;
}

void save_knowledge(const KnowledgeTable& table, const std::string& path) {
  json doc;
  doc["schema_version"] = kSchemaMajor;
  doc["room_types"] = table.room_types;
  doc["categories"] = table.categories;
  json rows = json::array();
  for (std::size_t i = 0; i < table.categories.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < table.room_types.size(); ++j) {
      row.push_back(table.scores[i * table.room_types.size() + j]);
    }
    rows.push_back(std::move(row));
  }
  doc["scores"] = std::move(rows);
  save_json_file(doc, path);
}

SquareMatrix count_cooccurrence(const Corpus& corpus) {
  if (corpus.rooms.empty()) throw IntegrityError("co-occurrence requires a non-empty corpus");
  SquareMatrix m(corpus.vocab_size());
  for (const auto& room : corpus.rooms) {
    std::set<std::size_t> present;
    for (const auto& o : room.objects) present.insert(corpus.categories.at(o.category));
    for (std::size_t i : present) {
      for (std::size_t j : present) m.at(i, j) += 1.0;
    }
  }
  return m;
}

double occupation_proportion(const RoomDocument& room) {
  double covered = 0.0;
  for (const auto& o : room.objects) {
    if (o.floor_contact) covered += o.footprint_area;
  }
  return covered / room.floor_area;
}

OccupationPrior fit_occupation_prior(const Corpus& corpus, const std::string& room_type) {
  std::vector<double> proportions;
  for (const auto& room : corpus.rooms) {
    if (room.labels.size() == 1 && room.labels[0] == room_type) {
      proportions.push_back(occupation_proportion(room));
    }
  }
  if (proportions.size() < 5) {
    throw IntegrityError("room type '" + room_type + "' has only " +
                         std::to_string(proportions.size()) +
                         " single-label rooms (need >= 5); use a fallback default");
  }
  double mean = 0.0;
  for (double p : proportions) mean += p;
  mean /= static_cast<double>(proportions.size());
  double var = 0.0;
  for (double p : proportions) var += (p - mean) * (p - mean);
  var /= static_cast<double>(proportions.size());
  OccupationPrior prior;
  prior.delta = mean;
  prior.sigma = std::max(std::sqrt(var), 1e-6);
  return prior;
}

CountPrior count_instance_priors(const Corpus& corpus) {
  if (corpus.rooms.empty()) throw IntegrityError("count priors require a non-empty corpus");
  const std::size_t v = corpus.vocab_size();
  const std::size_t u = corpus.num_room_types();
  // counts[(i,j)] = per-room instance counts of category i over the
  // single-label rooms of type j that contain it.
  std::vector<std::vector<int>> samples(v * u);
  for (const auto& room : corpus.rooms) {
    if (room.labels.size() != 1) continue;
    const std::size_t j = corpus.room_types.at(room.labels[0]);
    std::vector<int> per_category(v, 0);
    for (const auto& o : room.objects) ++per_category[corpus.categories.at(o.category)];
    for (std::size_t i = 0; i < v; ++i) {
      if (per_category[i] > 0) samples[i * u + j].push_back(per_category[i]);
    }
  }
  CountPrior prior;
  prior.num_categories = v;
  prior.num_room_types = u;
  prior.counts.assign(v * u, 0);
  for (std::size_t i = 0; i < v * u; ++i) {
    auto& s = samples[i];
    if (s.empty()) continue;
    std::sort(s.begin(), s.end());
    // Nearest rank: value at position ceil(0.95 * n), 1-based.
    const std::size_t rank =
        static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(s.size())));
    prior.counts[i] = s[rank - 1];
  }
  return prior;
}

}  // namespace roomrec
