#include "roomrec/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>
#include <utility>

#include "roomrec/json_io.hpp"
#include "roomrec/llda.hpp"
#include "roomrec/png_io.hpp"

namespace roomrec {
namespace {

namespace fs = std::filesystem;

// FNV-1a over file bytes, for the model cache key.
std::uint64_t hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::uint64_t h = 1469598103934665603ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  return h;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
  h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

class StageTimer {
 public:
  explicit StageTimer(RunReport& report) : report_(report) {}

  template <typename F>
  auto run(const std::string& name, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      record(name, start);
    } else {
      auto result = f();
      record(name, start);
      return result;
    }
  }

 private:
  void record(const std::string& name, std::chrono::steady_clock::time_point start) {
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    report_.stages.push_back({name, elapsed.count()});
  }
  RunReport& report_;
};

}  // namespace

PipelineConfig load_pipeline_config(const std::string& path) {
  const nlohmann::json doc = load_json_file(path);
  check_schema(doc, "config " + path);
  PipelineConfig c;
  const auto str = [&](const char* key, std::string& out) {
    if (doc.contains(key)) out = doc[key].get<std::string>();
  };
  str("corpus", c.corpus_path);
  str("knowledge", c.knowledge_path);
  str("catalog", c.catalog_path);
  str("templates", c.templates_path);
  str("floorplan", c.floorplan_path);
  str("style_reference_image", c.style_reference_image);
  str("style_reference_palette", c.style_reference_palette);
  str("style_room_type", c.style_room_type);
  str("out_dir", c.out_dir);
  str("model_cache_dir", c.model_cache_dir);
  c.alpha = doc.value("alpha", c.alpha);
  c.beta = doc.value("beta", c.beta);
  c.train_iterations = doc.value("train_iterations", c.train_iterations);
  c.embedding_dim = doc.value("embedding_dim", c.embedding_dim);
  c.x_max = doc.value("x_max", c.x_max);
  c.weight_exponent = doc.value("weight_exponent", c.weight_exponent);
  c.embedding_iterations = doc.value("embedding_iterations", c.embedding_iterations);
  c.predict_threshold = doc.value("predict_threshold", c.predict_threshold);
  c.split_threshold = doc.value("split_threshold", c.split_threshold);
  c.top_k = doc.value("top_k", c.top_k);
  c.lambda = doc.value("lambda", c.lambda);
  c.significance = doc.value("significance", c.significance);
  c.weights.mu1 = doc.value("mu1", c.weights.mu1);
  c.weights.mu2 = doc.value("mu2", c.weights.mu2);
  c.weights.mu3 = doc.value("mu3", c.weights.mu3);
  c.weights.xi = doc.value("xi", c.weights.xi);
  c.weights.literal_style_term = doc.value("literal_style_term", false);
  c.schedule.initial_temperature = doc.value("initial_temperature", 1.0);
  c.schedule.decay = doc.value("decay", 0.97);
  c.schedule.steps = doc.value("steps", std::size_t{500});
  c.schedule.moves_per_step = doc.value("moves_per_step", std::size_t{50});
  c.restarts = doc.value("restarts", std::size_t{1});
  c.threads = doc.value("threads", std::size_t{1});
  c.seed = doc.value("seed", std::uint64_t{42});
  return c;
}

OccupationPrior prior_for_labels(const Corpus& corpus, const std::vector<std::string>& labels,
                                 std::vector<std::string>* warnings) {
  OccupationPrior result{0.0, 0.0};
  for (const auto& label : labels) {
    OccupationPrior p;
    try {
      p = fit_occupation_prior(corpus, label);
    } catch (const IntegrityError&) {
      p = {0.3, 0.1};  // fallback default
      if (warnings) {
        warnings->push_back("room type '" + label +
                            "' has too few rooms for an occupation prior; using the default");
      }
    }
    result.delta += p.delta;
    result.sigma += p.sigma;
  }
  result.delta /= static_cast<double>(labels.size());
  result.sigma = std::max(result.sigma / static_cast<double>(labels.size()), 1e-6);
  return result;
}

SelectionState optimize_with_restarts(const SelectionProblem& problem,
                                      const AnnealSchedule& schedule, std::size_t restarts,
                                      std::size_t threads) {
  if (restarts < 1) throw UsageError("restarts must be >= 1");
  std::vector<SelectionState> results(restarts);
  std::vector<std::exception_ptr> errors(restarts);
  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, restarts));
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  const auto work = [&]() {
    for (std::size_t i = next.fetch_add(1); i < restarts; i = next.fetch_add(1)) {
      try {
        AnnealSchedule s = schedule;
        s.seed = schedule.seed + i;
        results[i] = optimize_selection(problem, s);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  // Deterministic reduction: best cost, lowest seed first on ties.
  std::size_t best = 0;
  for (std::size_t i = 1; i < restarts; ++i) {
    if (results[i].cost.total < results[best].cost.total) best = i;
  }
  return std::move(results[best]);
}

RunReport run_pipeline(const PipelineConfig& config) {
  RunReport report;
  report.seed = config.seed;
  StageTimer timer(report);

  const auto require = [](const std::string& value, const char* field) {
    if (value.empty()) throw UsageError(std::string("config field '") + field + "' is required");
  };
  require(config.corpus_path, "corpus");
  require(config.knowledge_path, "knowledge");
  require(config.catalog_path, "catalog");
  require(config.templates_path, "templates");
  require(config.floorplan_path, "floorplan");
  require(config.style_room_type, "style_room_type");
  if (config.style_reference_image.empty() && config.style_reference_palette.empty()) {
    throw UsageError("config needs style_reference_image or style_reference_palette");
  }

  fs::create_directories(config.out_dir);
  std::vector<std::pair<fs::path, fs::path>> pending;  // .partial -> final
  const auto stage_out = [&](const std::string& name) {
    const fs::path final_path = fs::path(config.out_dir) / name;
    const fs::path partial = final_path.string() + ".partial";
    pending.emplace_back(partial, final_path);
    return partial.string();
  };

  const Corpus corpus = timer.run("load-corpus", [&] { return load_corpus(config.corpus_path); });
  const KnowledgeTable knowledge = load_knowledge(config.knowledge_path);
  const Catalog catalog = load_catalog(config.catalog_path);
  const TemplateLibrary templates = load_templates(config.templates_path);
  const Residence residence = load_residence(config.floorplan_path);

  const LldaModel model = timer.run("train", [&]() -> LldaModel {
    LldaConfig lc;
    lc.alpha = config.alpha;
    lc.beta = config.beta;
    lc.iterations = config.train_iterations;
    lc.seed = config.seed;
    if (!config.model_cache_dir.empty()) {
      std::uint64_t key = hash_file(config.corpus_path);
      key = mix(key, std::bit_cast<std::uint64_t>(lc.alpha));
      key = mix(key, std::bit_cast<std::uint64_t>(lc.beta));
      key = mix(key, lc.iterations);
      key = mix(key, lc.seed);
      fs::create_directories(config.model_cache_dir);
      const fs::path cached =
          fs::path(config.model_cache_dir) / ("model_" + std::to_string(key) + ".json");
      if (fs::exists(cached)) return load_model(cached.string());
      LldaModel trained = train_llda(corpus, lc);
      save_model(trained, cached.string());
      return trained;
    }
    return train_llda(corpus, lc);
  });
  save_model(model, stage_out("model.json"));

  const RoomLists lists = timer.run("recommend-categories", [&] {
    const SquareMatrix cooc = count_cooccurrence(corpus);
    EmbeddingConfig ec;
    ec.dim = config.embedding_dim;
    ec.x_max = config.x_max;
    ec.exponent = config.weight_exponent;
    ec.iterations = config.embedding_iterations;
    ec.seed = config.seed;
    const EmbeddingSet emb = train_embeddings(cooc, corpus.categories.names(), ec);
    const CountPrior priors = count_instance_priors(corpus);

    std::vector<std::vector<std::string>> label_sets;
    for (const auto& room : residence.rooms) label_sets.push_back(room.labels);
    CandidateLists candidates =
        build_candidate_lists(model, label_sets, emb, knowledge, priors, config.top_k);
    const ListAssignment assignment =
        assign_lists(residence, candidates, knowledge, config.lambda, config.seed);

    RoomLists out;
    out.residence = residence;
    out.objective = assignment.objective;
    out.h1 = assignment.h1;
    out.h2 = assignment.h2;
    for (const auto& room : residence.rooms) {
      const auto& options = candidates.at(label_set_key(room.labels));
      const std::string& chosen = assignment.list_of_room.at(room.room_id);
      for (const auto& list : options) {
        if (list.list_id == chosen) {
          out.list_of_room[room.room_id] = list;
          break;
        }
      }
    }
    return out;
  });
  save_room_lists(lists, stage_out("lists.json"));

  SelectionProblem problem;
  problem.residence = residence;
  problem.catalog = &catalog;
  problem.weights = config.weights;

  const TemplateMatch match = timer.run("match-template", [&] {
    const Palette reference = config.style_reference_palette.empty()
                                  ? extract_palette(read_png(config.style_reference_image),
                                                    config.seed)
                                  : load_palette(config.style_reference_palette);
    return match_template(reference, config.style_room_type, templates);
  });

  const GroupModel groups = timer.run("group-model", [&] {
    return build_group_model(corpus, config.significance, catalog.families());
  });
  problem.groups = &groups;

  for (const auto& room : residence.rooms) {
    problem.lists.push_back(lists.list_of_room.at(room.room_id));
    problem.priors.push_back(prior_for_labels(corpus, room.labels, &report.warnings));
    std::vector<std::string> labels = room.labels;
    std::sort(labels.begin(), labels.end());
    Palette palette = match.lookup(labels[0]);
    for (std::size_t i = 1; i < labels.size(); ++i) {
      palette = hybrid_palette(palette, match.lookup(labels[i]));
    }
    problem.target_palettes.push_back(palette);
  }

  const SelectionState selection = timer.run("optimize-selection", [&] {
    AnnealSchedule schedule = config.schedule;
    schedule.seed = config.seed;
    return optimize_with_restarts(problem, schedule, config.restarts, config.threads);
  });
  report.cost = selection.cost;
  save_selection(problem, selection, stage_out("selection.json"));

  // report.json stays free of wall-clock values so runs are reproducible;
  // timings are only surfaced on the console.
  nlohmann::json rj;
  rj["schema_version"] = kSchemaMajor;
  rj["seed"] = config.seed;
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : report.stages) stages.push_back(s.name);
  rj["stages"] = std::move(stages);
  rj["warnings"] = report.warnings;
  rj["cost"] = {{"total", selection.cost.total},
                {"occupation", selection.cost.occupation},
                {"grouping", selection.cost.grouping},
                {"style", selection.cost.style}};
  save_json_file(rj, stage_out("report.json"));

  for (const auto& [partial, final_path] : pending) {
    fs::rename(partial, final_path);
  }
  return report;
}

}  // namespace roomrec
