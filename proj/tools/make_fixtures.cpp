// Regenerates the bundled fixtures/ inputs deterministically. Run from the
// repository root: build/make_fixtures [output-dir]

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "roomrec/catalog.hpp"
#include "roomrec/corpus.hpp"
#include "roomrec/json_io.hpp"
#include "roomrec/lists.hpp"
#include "roomrec/palette.hpp"
#include "roomrec/png_io.hpp"
#include "roomrec/synthetic.hpp"

using namespace roomrec;

namespace {

constexpr std::uint64_t kSeed = 7;

GeneratorSpec fixture_spec() {
  GeneratorSpec spec;
  spec.num_room_types = 4;
  spec.num_categories = 30;
  spec.rooms_per_type = 100;
  spec.objects_per_room = 12;
  spec.with_positions = true;
  spec.substitute_pairs = {{0, 1}};      // never co-occur, same contexts
  spec.adjacency_rules = {{2, 3, 0.4}};  // spatial group
  spec.material_rules = {{2, 3, 0}};     // grouped pair sticks to family 0
  spec.num_material_families = 3;
  spec.materials_per_family = 2;
  return spec;
}

KnowledgeTable make_knowledge(const Corpus& corpus) {
  KnowledgeTable table;
  table.categories = corpus.categories.names();
  table.room_types = corpus.room_types.names();
  for (std::size_t c = 0; c < table.categories.size(); ++c) {
    for (std::size_t t = 0; t < table.room_types.size(); ++t) {
      // Deterministic spread over [2.0, 5.0] so both count-bound branches
      // (score <= 2.5 and > 2.5) occur.
      table.scores.push_back(2.0 + static_cast<double>((c * 7 + t * 3) % 7) / 2.0);
    }
  }
  return table;
}

Catalog make_catalog(const Corpus& corpus) {
  Catalog catalog;
  for (std::size_t f = 0; f < 3; ++f) {
    for (std::size_t m = 0; m < 2; ++m) {
      const std::string id = "fam" + std::to_string(f) + "_m" + std::to_string(m);
      catalog.materials[id] = {"family" + std::to_string(f), synthetic_material_color(f, m)};
    }
  }
  const auto& names = corpus.categories.names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::size_t family = i % 3;
    const std::vector<std::string> materials = {
        "fam" + std::to_string(family) + "_m0", "fam" + std::to_string(family) + "_m1",
        "fam" + std::to_string((family + 1) % 3) + "_m0"};
    const double area = 0.4 + 0.05 * static_cast<double>(i % 5);
    CatalogTemplate t;
    t.template_id = names[i] + "_t0";
    t.category = names[i];
    t.footprint_area = area;
    t.parts.push_back({"body", materials});
    catalog.templates_of_category[names[i]].push_back(t);
    if (i % 3 == 0) {  // a second, larger template for every third category
      CatalogTemplate t2 = t;
      t2.template_id = names[i] + "_t1";
      t2.footprint_area = area + 0.3;
      catalog.templates_of_category[names[i]].push_back(t2);
    }
  }
  return catalog;
}

Palette house_palette(std::size_t house, std::size_t type) {
  Palette p;
  for (std::size_t i = 0; i < 5; ++i) {
    p.colors[i] = {std::fmod(0.13 * static_cast<double>(house * 5 + i), 1.0),
                   0.3 + 0.1 * static_cast<double>(i % 3),
                   0.9 - 0.15 * static_cast<double>(i) - 0.02 * static_cast<double>(type)};
  }
  return canonical_palette(p);
}

TemplateLibrary make_templates(const Corpus& corpus) {
  TemplateLibrary library;
  for (std::size_t h = 0; h < 3; ++h) {
    for (std::size_t t = 0; t < corpus.num_room_types(); ++t) {
      library.entries.push_back({"house" + std::to_string(h), corpus.room_types.name(t),
                                 house_palette(h, t)});
    }
  }
  return library;
}

// Style reference: five horizontal color bands close to house1's palette for
// room type 0, so template matching lands there.
RgbImage make_style_image() {
  const Palette target = house_palette(1, 0);
  RgbImage image;
  image.width = 60;
  image.height = 50;
  image.pixels.resize(image.width * image.height * 3);
  for (std::size_t y = 0; y < image.height; ++y) {
    const HsvColor& c = target.colors[y / 10];
    // HSV -> RGB, flat saturation bands.
    const double h6 = c.h * 6.0;
    const int sector = static_cast<int>(h6) % 6;
    const double f = h6 - static_cast<int>(h6);
    const double p = c.v * (1.0 - c.s);
    const double q = c.v * (1.0 - c.s * f);
    const double t = c.v * (1.0 - c.s * (1.0 - f));
    double rgb[3] = {0, 0, 0};
    switch (sector) {
      case 0: rgb[0] = c.v; rgb[1] = t; rgb[2] = p; break;
      case 1: rgb[0] = q; rgb[1] = c.v; rgb[2] = p; break;
      case 2: rgb[0] = p; rgb[1] = c.v; rgb[2] = t; break;
      case 3: rgb[0] = p; rgb[1] = q; rgb[2] = c.v; break;
      case 4: rgb[0] = t; rgb[1] = p; rgb[2] = c.v; break;
      default: rgb[0] = c.v; rgb[1] = p; rgb[2] = q; break;
    }
    for (std::size_t x = 0; x < image.width; ++x) {
      const std::size_t i = (y * image.width + x) * 3;
      for (int k = 0; k < 3; ++k) {
        image.pixels[i + k] = static_cast<std::uint8_t>(rgb[k] * 255.0 + 0.5);
      }
    }
  }
  return image;
}

Residence make_plan(const Corpus& corpus) {
  Residence plan;
  plan.rooms.push_back({"master_room", {corpus.room_types.name(0)}, 22.0});
  plan.rooms.push_back({"second_room", {corpus.room_types.name(0)}, 18.0});
  plan.rooms.push_back({"main_room", {corpus.room_types.name(1)}, 26.0});
  plan.rooms.push_back(
      {"open_room", {corpus.room_types.name(2), corpus.room_types.name(3)}, 34.0});
  return plan;
}

nlohmann::json make_config(std::size_t threads) {
  nlohmann::json c;
  c["schema_version"] = kSchemaMajor;
  c["corpus"] = "corpus.json";
  c["knowledge"] = "knowledge.json";
  c["catalog"] = "catalog.json";
  c["templates"] = "templates.json";
  c["floorplan"] = "plan.json";
  c["style_reference_image"] = "style.png";
  c["style_room_type"] = "type0";
  c["out_dir"] = "out";
  c["train_iterations"] = 200;
  c["embedding_dim"] = 8;
  c["embedding_iterations"] = 80;
  c["top_k"] = 8;
  c["lambda"] = 1.0;
  c["steps"] = 300;
  c["moves_per_step"] = 40;
  c["restarts"] = 2;
  c["threads"] = threads;
  c["seed"] = 42;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "fixtures";
  std::filesystem::create_directories(dir);
  const SyntheticCorpus synth = generate_synthetic_corpus(kSeed, fixture_spec());
  save_corpus(synth.corpus, (dir / "corpus.json").string());
  save_knowledge(make_knowledge(synth.corpus), (dir / "knowledge.json").string());
  save_catalog(make_catalog(synth.corpus), (dir / "catalog.json").string());
  save_templates(make_templates(synth.corpus), (dir / "templates.json").string());
  write_png(make_style_image(), (dir / "style.png").string());
  save_residence(make_plan(synth.corpus), (dir / "plan.json").string());
  save_json_file(make_config(1), (dir / "pipeline.json").string());
  save_json_file(make_config(2), (dir / "pipeline_threads2.json").string());
  std::printf("fixtures written to %s\n", dir.string().c_str());
  return 0;
}
