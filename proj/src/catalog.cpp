#include "roomrec/catalog.hpp"

#include "roomrec/json_io.hpp"

namespace roomrec {

const CatalogMaterial& Catalog::material(const std::string& id) const {
  auto it = materials.find(id);
  if (it == materials.end()) throw IntegrityError("catalog has no material '" + id + "'");
  return it->second;
}

const std::vector<CatalogTemplate>& Catalog::templates(const std::string& category) const {
  auto it = templates_of_category.find(category);
  if (it == templates_of_category.end() || it->second.empty()) {
    throw IntegrityError("catalog has no templates for category '" + category + "'");
  }
  return it->second;
}

std::map<std::string, std::string> Catalog::families() const {
  std::map<std::string, std::string> out;
  for (const auto& [id, m] : materials) out[id] = m.family;
  return out;
}

Catalog load_catalog(const std::string& path) {
  const nlohmann::json doc = load_json_file(path);
  check_schema(doc, "catalog " + path);
  Catalog catalog;
  for (const auto& [id, mj] : doc.at("materials").items()) {
    CatalogMaterial m;
    m.family = mj.at("family").get<std::string>();
    const auto& cj = mj.at("color");
    m.color = {cj[0].get<double>(), cj[1].get<double>(), cj[2].get<double>()};
    catalog.materials.emplace(id, std::move(m));
  }
  for (const auto& tj : doc.at("templates")) {
    CatalogTemplate t;
    t.template_id = tj.at("template_id").get<std::string>();
    t.category = tj.at("category").get<std::string>();
    t.footprint_area = tj.at("footprint_area").get<double>();
    if (t.footprint_area < 0.0) {
      throw IntegrityError("catalog template '" + t.template_id + "': negative footprint_area");
    }
    t.floor_contact = tj.value("floor_contact", true);
    for (const auto& pj : tj.at("parts")) {
      CatalogPart part;
      part.label = pj.at("label").get<std::string>();
      for (const auto& m : pj.at("materials")) {
        const std::string id = m.get<std::string>();
        if (!catalog.materials.count(id)) {
          throw IntegrityError("catalog template '" + t.template_id + "', part '" + part.label +
                               "': unknown material '" + id + "'");
        }
        part.materials.push_back(id);
      }
      if (part.materials.empty()) {
        throw IntegrityError("catalog template '" + t.template_id + "', part '" + part.label +
                             "': no materials");
      }
      t.parts.push_back(std::move(part));
    }
    catalog.templates_of_category[t.category].push_back(std::move(t));
  }
  return catalog;
}

void save_catalog(const Catalog& catalog, const std::string& path) {
  nlohmann::json doc;
  doc["schema_version"] = kSchemaMajor;
  nlohmann::json materials;
  for (const auto& [id, m] : catalog.materials) {
    materials[id] = {{"family", m.family}, {"color", {m.color.h, m.color.s, m.color.v}}};
  }
  doc["materials"] = std::move(materials);
  nlohmann::json templates = nlohmann::json::array();
  for (const auto& [category, list] : catalog.templates_of_category) {
    (void)category;
    for (const auto& t : list) {
      nlohmann::json tj;
      tj["template_id"] = t.template_id;
      tj["category"] = t.category;
      tj["footprint_area"] = t.footprint_area;
      tj["floor_contact"] = t.floor_contact;
      nlohmann::json parts = nlohmann::json::array();
      for (const auto& part : t.parts) {
        parts.push_back({{"label", part.label}, {"materials", part.materials}});
      }
      tj["parts"] = std::move(parts);
      templates.push_back(std::move(tj));
    }
  }
  doc["templates"] = std::move(templates);
  save_json_file(doc, path);
}

}  // namespace roomrec
