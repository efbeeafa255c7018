#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roomrec/selection.hpp"

namespace roomrec {

// Everything one end-to-end run needs; mirrored by the config JSON, with
// CLI flags overriding file values.
struct PipelineConfig {
  std::string corpus_path;
  std::string knowledge_path;
  std::string catalog_path;
  std::string templates_path;
  std::string floorplan_path;
  std::string style_reference_image;    // PNG; or
  std::string style_reference_palette;  // palette JSON
  std::string style_room_type;
  std::string out_dir = ".";
  std::string model_cache_dir;  // empty: no caching

  double alpha = -1.0;  // < 0: 50/U
  double beta = 0.01;
  std::size_t train_iterations = 500;

  std::size_t embedding_dim = 32;
  double x_max = 100.0;
  double weight_exponent = 0.75;
  std::size_t embedding_iterations = 100;

  double predict_threshold = 0.3;
  double split_threshold = 0.95;
  int top_k = 20;
  double lambda = 1.0;
  double significance = 0.05;

  CostWeights weights;
  AnnealSchedule schedule;
  std::size_t restarts = 1;
  std::size_t threads = 1;
  std::uint64_t seed = 42;
};

PipelineConfig load_pipeline_config(const std::string& path);

struct StageRecord {
  std::string name;
  double seconds = 0.0;
};

struct RunReport {
  std::vector<StageRecord> stages;
  std::vector<std::string> warnings;
  CostBreakdown cost;
  std::uint64_t seed = 0;
};

// train (or cached model) -> candidate lists -> list assignment ->
// template match -> instance selection. Outputs land in config.out_dir;
// on failure, files written so far keep a .partial suffix.
RunReport run_pipeline(const PipelineConfig& config);

// Occupation prior for a (possibly hybrid) label set: per-type priors
// averaged; types with too few rooms fall back to (0.3, 0.1) with a
// warning.
OccupationPrior prior_for_labels(const Corpus& corpus, const std::vector<std::string>& labels,
                                 std::vector<std::string>* warnings);

// Multi-restart annealing: seeds seed..seed+restarts-1, best cost wins,
// ties broken by the lowest seed. Restarts may run on several threads; the
// result does not depend on the thread count.
SelectionState optimize_with_restarts(const SelectionProblem& problem,
                                      const AnnealSchedule& schedule, std::size_t restarts,
                                      std::size_t threads);

}  // namespace roomrec
