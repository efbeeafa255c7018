#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "roomrec/catalog.hpp"
#include "roomrec/corpus.hpp"
#include "roomrec/json_io.hpp"
#include "roomrec/lists.hpp"
#include "roomrec/llda.hpp"
#include "roomrec/pipeline.hpp"
#include "roomrec/png_io.hpp"
#include "roomrec/report.hpp"
#include "roomrec/selection.hpp"

namespace {

using namespace roomrec;

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void cmd_corpus_stats(const std::string& path) {
  const Corpus corpus = load_corpus(path);
  std::printf("categories (V): %zu\n", corpus.vocab_size());
  std::printf("room types (U): %zu\n", corpus.num_room_types());
  std::printf("rooms: %zu\n", corpus.rooms.size());
  std::printf("\n%-20s %8s %10s %10s\n", "room type", "rooms", "delta", "sigma");
  for (const auto& type : corpus.room_types.names()) {
    std::size_t count = 0;
    for (const auto& room : corpus.rooms) {
      if (std::find(room.labels.begin(), room.labels.end(), type) != room.labels.end()) ++count;
    }
    try {
      const OccupationPrior prior = fit_occupation_prior(corpus, type);
      std::printf("%-20s %8zu %10.4f %10.4f\n", type.c_str(), count, prior.delta, prior.sigma);
    } catch (const IntegrityError&) {
      std::printf("%-20s %8zu %10s %10s\n", type.c_str(), count, "n/a", "n/a");
    }
  }
}

void cmd_train(const std::string& corpus_path, const std::string& out, double alpha, double beta,
               std::size_t iters, std::uint64_t seed, bool average) {
  const Corpus corpus = load_corpus(corpus_path);
  LldaConfig config;
  config.alpha = alpha;
  config.beta = beta;
  config.iterations = iters;
  config.seed = seed;
  config.average_samples = average;
  save_model(train_llda(corpus, config), out);
  std::printf("model written to %s\n", out.c_str());
}

void cmd_predict(const std::string& model_path, const std::string& objects, double threshold,
                 std::uint64_t seed) {
  const LldaModel model = load_model(model_path);
  const PosteriorReport report = predict_room_types(model, split_csv(objects), threshold, seed);
  std::printf("%-20s %10s\n", "room type", "theta");
  for (std::size_t t = 0; t < model.room_types.size(); ++t) {
    std::printf("%-20s %10.4f\n", model.room_types[t].c_str(), report.theta[t]);
  }
  std::printf("predicted:");
  for (const auto& label : report.predicted) std::printf(" %s", label.c_str());
  std::printf("\n");
  if (report.unknown_dropped > 0) {
    std::printf("warning: %zu unknown categories dropped\n", report.unknown_dropped);
  }
}

struct RecommendCategoriesArgs {
  std::string model, corpus, knowledge, floorplan, out;
  double lambda = 1.0;
  int top_k = 20;
  double split_threshold = 0.95;
  std::size_t dim = 32;
  double x_max = 100.0;
  double exponent = 0.75;
  std::size_t iterations = 100;
  std::uint64_t seed = 0;
};

void cmd_recommend_categories(const RecommendCategoriesArgs& args) {
  const LldaModel model = load_model(args.model);
  const Corpus corpus = load_corpus(args.corpus);
  const KnowledgeTable knowledge = load_knowledge(args.knowledge);
  const Residence residence = load_residence(args.floorplan);

  EmbeddingConfig ec;
  ec.dim = args.dim;
  ec.x_max = args.x_max;
  ec.exponent = args.exponent;
  ec.iterations = args.iterations;
  ec.seed = args.seed;
  const EmbeddingSet emb =
      train_embeddings(count_cooccurrence(corpus), corpus.categories.names(), ec);
  const CountPrior priors = count_instance_priors(corpus);

  std::vector<std::vector<std::string>> label_sets;
  for (const auto& room : residence.rooms) label_sets.push_back(room.labels);
  CandidateLists candidates =
      build_candidate_lists(model, label_sets, emb, knowledge, priors, args.top_k);
  const ListAssignment assignment =
      assign_lists(residence, candidates, knowledge, args.lambda, args.seed);

  RoomLists lists;
  lists.residence = residence;
  lists.objective = assignment.objective;
  lists.h1 = assignment.h1;
  lists.h2 = assignment.h2;
  for (const auto& room : residence.rooms) {
    for (const auto& list : candidates.at(label_set_key(room.labels))) {
      if (list.list_id == assignment.list_of_room.at(room.room_id)) {
        lists.list_of_room[room.room_id] = list;
        break;
      }
    }
  }
  save_room_lists(lists, args.out);
  std::printf("objective %.4f (H1 %.4f, H2 %.4f); lists written to %s\n", assignment.objective,
              assignment.h1, assignment.h2, args.out.c_str());
}

struct RecommendInstancesArgs {
  std::string lists, catalog, templates, style_ref, style_palette, style_room_type, corpus, out;
  CostWeights weights;
  AnnealSchedule schedule;
  double significance = 0.05;
  std::size_t restarts = 1;
  std::size_t threads = 1;
  std::uint64_t seed = 0;
};

void cmd_recommend_instances(const RecommendInstancesArgs& args) {
  const RoomLists lists = load_room_lists(args.lists);
  const Catalog catalog = load_catalog(args.catalog);
  const TemplateLibrary templates = load_templates(args.templates);
  const Corpus corpus = load_corpus(args.corpus);

  const Palette reference = args.style_palette.empty()
                                ? extract_palette(read_png(args.style_ref), args.seed)
                                : load_palette(args.style_palette);
  const TemplateMatch match = match_template(reference, args.style_room_type, templates);
  const GroupModel groups = build_group_model(corpus, args.significance, catalog.families());

  SelectionProblem problem;
  problem.residence = lists.residence;
  problem.catalog = &catalog;
  problem.groups = &groups;
  problem.weights = args.weights;
  std::vector<std::string> warnings;
  for (const auto& room : lists.residence.rooms) {
    problem.lists.push_back(lists.list_of_room.at(room.room_id));
    problem.priors.push_back(prior_for_labels(corpus, room.labels, &warnings));
    std::vector<std::string> labels = room.labels;
    std::sort(labels.begin(), labels.end());
    Palette palette = match.lookup(labels[0]);
    for (std::size_t i = 1; i < labels.size(); ++i) {
      palette = hybrid_palette(palette, match.lookup(labels[i]));
    }
    problem.target_palettes.push_back(palette);
  }

  AnnealSchedule schedule = args.schedule;
  schedule.seed = args.seed;
  const SelectionState state =
      optimize_with_restarts(problem, schedule, args.restarts, args.threads);
  save_selection(problem, state, args.out);
  for (const auto& w : warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  std::printf("cost %.6f (G1 %.6f, G2 %.6f, G3 %.6f); selection written to %s\n",
              state.cost.total, state.cost.occupation, state.cost.grouping, state.cost.style,
              args.out.c_str());
}

void cmd_templates_build(const std::string& dir, const std::string& out, std::uint64_t seed) {
  namespace fs = std::filesystem;
  TemplateLibrary library;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    // Naming convention: <house_id>__<room_type>.png
    const std::string stem = file.stem().string();
    const std::size_t sep = stem.find("__");
    if (sep == std::string::npos) {
      throw UsageError("template image '" + file.string() +
                       "' must be named <house_id>__<room_type>.png");
    }
    TemplateEntry entry;
    entry.house_id = stem.substr(0, sep);
    entry.room_type = stem.substr(sep + 2);
    entry.palette = extract_palette(read_png(file.string()), seed);
    library.entries.push_back(std::move(entry));
  }
  if (library.entries.empty()) throw UsageError("no .png files found in " + dir);
  save_templates(library, out);
  std::printf("%zu templates written to %s\n", library.entries.size(), out.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Style-compatible object category, instance, and material recommendation "
               "for multi-room residences"};
  app.require_subcommand(1);

  // corpus stats
  auto* corpus_cmd = app.add_subcommand("corpus", "Corpus inspection");
  corpus_cmd->require_subcommand(1);
  std::string stats_path;
  auto* stats_cmd = corpus_cmd->add_subcommand("stats", "Print V, U, room counts, priors");
  stats_cmd->add_option("path", stats_path, "corpus.json")->required();

  // train
  std::string train_corpus, train_out = "model.json";
  double train_alpha = -1.0, train_beta = 0.01;
  std::size_t train_iters = 500;
  std::uint64_t train_seed = 0;
  bool train_average = false;
  auto* train_cmd = app.add_subcommand("train", "Train the labeled topic model");
  train_cmd->add_option("--corpus", train_corpus, "corpus.json")->required();
  train_cmd->add_option("--out", train_out, "output model.json")->capture_default_str();
  train_cmd->add_option("--alpha", train_alpha, "Dirichlet prior over labels; <0 uses 50/U")
      ->capture_default_str();
  train_cmd->add_option("--beta", train_beta, "Dirichlet prior over the vocabulary")
      ->capture_default_str();
  train_cmd->add_option("--iters", train_iters, "Gibbs sweeps")->capture_default_str();
  train_cmd->add_option("--seed", train_seed, "sampler seed")->capture_default_str();
  train_cmd->add_flag("--average", train_average, "average phi over post-burn-in sweeps");

  // predict
  std::string predict_model, predict_objects;
  double predict_threshold = 0.3;
  std::uint64_t predict_seed = 0;
  auto* predict_cmd = app.add_subcommand("predict", "Predict room types for an object list");
  predict_cmd->add_option("--model", predict_model, "model.json")->required();
  predict_cmd->add_option("--objects", predict_objects, "comma-separated category names")
      ->required();
  predict_cmd->add_option("--threshold", predict_threshold, "posterior threshold")
      ->capture_default_str();
  predict_cmd->add_option("--seed", predict_seed, "inference seed")->capture_default_str();

  // recommend-categories
  RecommendCategoriesArgs rc;
  auto* rc_cmd = app.add_subcommand("recommend-categories",
                                    "Build and assign per-room recommendation lists");
  rc_cmd->add_option("--model", rc.model, "model.json")->required();
  rc_cmd->add_option("--corpus", rc.corpus, "corpus.json")->required();
  rc_cmd->add_option("--knowledge", rc.knowledge, "knowledge.json")->required();
  rc_cmd->add_option("--floorplan", rc.floorplan, "plan.json")->required();
  rc_cmd->add_option("--out", rc.out, "output lists.json")->required();
  rc_cmd->add_option("--lambda", rc.lambda, "dissimilarity weight for repeated room types")
      ->capture_default_str();
  rc_cmd->add_option("--top-k", rc.top_k, "categories per list before splitting")
      ->capture_default_str();
  rc_cmd->add_option("--split-threshold", rc.split_threshold, "substitute similarity threshold")
      ->capture_default_str();
  rc_cmd->add_option("--dim", rc.dim, "embedding dimension")->capture_default_str();
  rc_cmd->add_option("--x-max", rc.x_max, "co-occurrence weight cutoff")->capture_default_str();
  rc_cmd->add_option("--weight-exponent", rc.exponent, "co-occurrence weighting exponent")
      ->capture_default_str();
  rc_cmd->add_option("--embed-iters", rc.iterations, "embedding training epochs")
      ->capture_default_str();
  rc_cmd->add_option("--seed", rc.seed, "seed")->capture_default_str();

  // recommend-instances
  RecommendInstancesArgs ri;
  auto* ri_cmd = app.add_subcommand("recommend-instances",
                                    "Select instances and materials by annealing");
  ri_cmd->add_option("--lists", ri.lists, "lists.json")->required();
  ri_cmd->add_option("--catalog", ri.catalog, "catalog.json")->required();
  ri_cmd->add_option("--templates", ri.templates, "templates.json")->required();
  ri_cmd->add_option("--style-ref", ri.style_ref, "style reference PNG");
  ri_cmd->add_option("--style-palette", ri.style_palette, "style reference palette JSON");
  ri_cmd->add_option("--style-room-type", ri.style_room_type, "room type of the reference")
      ->required();
  ri_cmd->add_option("--corpus", ri.corpus, "corpus.json")->required();
  ri_cmd->add_option("--out", ri.out, "output selection.json")->required();
  ri_cmd->add_option("--mu1", ri.weights.mu1, "occupation weight")->capture_default_str();
  ri_cmd->add_option("--mu2", ri.weights.mu2, "grouping weight")->capture_default_str();
  ri_cmd->add_option("--mu3", ri.weights.mu3, "style weight")->capture_default_str();
  ri_cmd->add_option("--xi", ri.weights.xi, "log smoothing of the group rule")
      ->capture_default_str();
  ri_cmd->add_flag("--literal-style-term", ri.weights.literal_style_term,
                   "use exp(-sum M) as the style term (comparison mode)");
  ri_cmd->add_option("--significance", ri.significance, "spatial-association test level")
      ->capture_default_str();
  ri_cmd->add_option("--t0", ri.schedule.initial_temperature, "initial temperature")
      ->capture_default_str();
  ri_cmd->add_option("--decay", ri.schedule.decay, "geometric temperature decay")
      ->capture_default_str();
  ri_cmd->add_option("--steps", ri.schedule.steps, "annealing steps")->capture_default_str();
  ri_cmd->add_option("--moves", ri.schedule.moves_per_step, "moves per step")
      ->capture_default_str();
  ri_cmd->add_option("--restarts", ri.restarts, "independent annealing runs")
      ->capture_default_str();
  ri_cmd->add_option("--threads", ri.threads, "worker threads for restarts")
      ->capture_default_str();
  ri_cmd->add_option("--seed", ri.seed, "seed")->capture_default_str();

  // palette
  auto* palette_cmd = app.add_subcommand("palette", "Palette extraction and comparison");
  palette_cmd->require_subcommand(1);
  std::string extract_image, extract_out;
  std::uint64_t extract_seed = 0;
  int extract_restarts = 50;
  auto* extract_cmd = palette_cmd->add_subcommand("extract", "Extract a 5-color palette");
  extract_cmd->add_option("image", extract_image, "PNG image")->required();
  extract_cmd->add_option("--out", extract_out, "write palette JSON here");
  extract_cmd->add_option("--seed", extract_seed, "k-means seed")->capture_default_str();
  extract_cmd->add_option("--restarts", extract_restarts, "k-means restarts")
      ->capture_default_str();
  std::string diff_a, diff_b;
  bool diff_permutation = false;
  auto* diff_cmd = palette_cmd->add_subcommand("diff", "Weighted distance of two palettes");
  diff_cmd->add_option("a", diff_a, "palette JSON")->required();
  diff_cmd->add_option("b", diff_b, "palette JSON")->required();
  diff_cmd->add_flag("--permutation-min", diff_permutation,
                     "minimize over all slot alignments");

  // templates build
  auto* templates_cmd = app.add_subcommand("templates", "Style template library tools");
  templates_cmd->require_subcommand(1);
  std::string tb_dir, tb_out = "templates.json";
  std::uint64_t tb_seed = 0;
  auto* tb_cmd = templates_cmd->add_subcommand(
      "build", "Extract palettes from <house_id>__<room_type>.png images");
  tb_cmd->add_option("dir", tb_dir, "image directory")->required();
  tb_cmd->add_option("--out", tb_out, "output templates.json")->capture_default_str();
  tb_cmd->add_option("--seed", tb_seed, "k-means seed")->capture_default_str();

  // pipeline
  std::string pipeline_config_path;
  std::uint64_t pipeline_seed = 0;
  bool pipeline_seed_set = false;
  std::string pipeline_out_dir;
  std::size_t pipeline_threads = 0;
  auto* pipeline_cmd = app.add_subcommand("pipeline", "Run every stage end to end");
  pipeline_cmd->add_option("--config", pipeline_config_path, "pipeline config JSON")->required();
  auto* seed_opt = pipeline_cmd->add_option("--seed", pipeline_seed, "override the config seed");
  auto* out_dir_opt =
      pipeline_cmd->add_option("--out-dir", pipeline_out_dir, "override the config out_dir");
  auto* threads_opt =
      pipeline_cmd->add_option("--threads", pipeline_threads, "override the config threads");

  // report
  std::string report_selection, report_out = "report.html";
  auto* report_cmd = app.add_subcommand("report", "Render selection.json as HTML");
  report_cmd->add_option("selection", report_selection, "selection.json")->required();
  report_cmd->add_option("--out", report_out, "output HTML path")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*stats_cmd) {
      cmd_corpus_stats(stats_path);
    } else if (*train_cmd) {
      cmd_train(train_corpus, train_out, train_alpha, train_beta, train_iters, train_seed,
                train_average);
    } else if (*predict_cmd) {
      cmd_predict(predict_model, predict_objects, predict_threshold, predict_seed);
    } else if (*rc_cmd) {
      cmd_recommend_categories(rc);
    } else if (*ri_cmd) {
      if (ri.style_ref.empty() == ri.style_palette.empty()) {
        throw UsageError("provide exactly one of --style-ref and --style-palette");
      }
      cmd_recommend_instances(ri);
    } else if (*extract_cmd) {
      const Palette palette =
          extract_palette(read_png(extract_image), extract_seed, extract_restarts);
      if (!extract_out.empty()) save_palette(palette, extract_out);
      for (const auto& c : palette.colors) std::printf("%.4f %.4f %.4f\n", c.h, c.s, c.v);
    } else if (*diff_cmd) {
      const Palette a = load_palette(diff_a);
      const Palette b = load_palette(diff_b);
      const double d =
          diff_permutation ? palette_distance_min_permutation(a, b) : palette_distance(a, b);
      std::printf("%.6f\n", d);
    } else if (*tb_cmd) {
      cmd_templates_build(tb_dir, tb_out, tb_seed);
    } else if (*pipeline_cmd) {
      PipelineConfig config = load_pipeline_config(pipeline_config_path);
      if (seed_opt->count() > 0) {
        (void)pipeline_seed_set;
        config.seed = pipeline_seed;
      }
      if (out_dir_opt->count() > 0) config.out_dir = pipeline_out_dir;
      if (threads_opt->count() > 0) config.threads = pipeline_threads;
      const RunReport run = run_pipeline(config);
      for (const auto& stage : run.stages) {
        std::fprintf(stderr, "%-22s %8.3fs\n", stage.name.c_str(), stage.seconds);
      }
      for (const auto& w : run.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
      std::printf("pipeline complete; cost %.6f; outputs in configured out_dir\n",
                  run.cost.total);
    } else if (*report_cmd) {
      const std::string html = render_selection_report(report_selection);
      std::ofstream out(report_out);
      if (!out) throw ParseError("cannot write " + report_out);
      out << html;
      std::printf("report written to %s\n", report_out.c_str());
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
