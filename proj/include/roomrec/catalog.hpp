#pragma once

#include <map>
#include <string>
#include <vector>

#include "roomrec/corpus.hpp"

namespace roomrec {

struct CatalogMaterial {
  std::string family;
  HsvColor color;
};

struct CatalogPart {
  std::string label;
  std::vector<std::string> materials;  // available material ids
};

struct CatalogTemplate {
  std::string template_id;
  std::string category;
  double footprint_area = 0.0;
  bool floor_contact = true;
  std::vector<CatalogPart> parts;
};

// Instance templates per category plus the material table (family + HSV
// color summary per material).
struct Catalog {
  std::map<std::string, CatalogMaterial> materials;
  std::map<std::string, std::vector<CatalogTemplate>> templates_of_category;

  const CatalogMaterial& material(const std::string& id) const;
  const std::vector<CatalogTemplate>& templates(const std::string& category) const;
  bool covers(const std::string& category) const {
    return templates_of_category.count(category) != 0;
  }

  // Material family map, the s(m,m') relation source for the group model.
  std::map<std::string, std::string> families() const;
};

Catalog load_catalog(const std::string& path);
void save_catalog(const Catalog& catalog, const std::string& path);

}  // namespace roomrec
