#include "roomrec/llda.hpp"

#include <algorithm>
#include <set>

#include "roomrec/json_io.hpp"
#include "roomrec/rng.hpp"

namespace roomrec {

std::size_t LldaModel::room_type_index(const std::string& name) const {
  auto it = std::find(room_types.begin(), room_types.end(), name);
  if (it == room_types.end()) {
    throw IntegrityError("room type '" + name + "' unknown to the model");
  }
  return static_cast<std::size_t>(it - room_types.begin());
}

std::vector<double> LldaModel::phi_row(const std::string& room_type) const {
  const std::size_t t = room_type_index(room_type);
  const std::size_t v = vocab_size();
  return std::vector<double>(phi.begin() + t * v, phi.begin() + (t + 1) * v);
}

LldaModel train_llda(const Corpus& corpus, const LldaConfig& config) {
  if (corpus.rooms.empty()) throw IntegrityError("cannot train on an empty corpus");
  const std::size_t u = corpus.num_room_types();
  const std::size_t v = corpus.vocab_size();
  const double alpha = config.alpha < 0.0 ? 50.0 / static_cast<double>(u) : config.alpha;
  const double beta = config.beta;

  // Tokenize up front; documents are processed in corpus order so the
  // chain is reproducible.
  std::vector<std::vector<std::size_t>> tokens(corpus.rooms.size());
  std::vector<std::vector<std::size_t>> labels(corpus.rooms.size());
  for (std::size_t d = 0; d < corpus.rooms.size(); ++d) {
    const auto& room = corpus.rooms[d];
    if (room.labels.empty()) {
      throw IntegrityError("room '" + room.room_id + "' has no labels; training requires them");
    }
    if (room.objects.empty()) {
      throw IntegrityError("room '" + room.room_id + "' has no objects");
    }
    for (const auto& o : room.objects) tokens[d].push_back(corpus.categories.at(o.category));
    for (const auto& l : room.labels) labels[d].push_back(corpus.room_types.at(l));
  }

  Rng rng(config.seed);
  std::vector<double> n_tw(u * v, 0.0);
  std::vector<double> n_t(u, 0.0);
  std::vector<std::vector<double>> n_dt(corpus.rooms.size(), std::vector<double>(u, 0.0));
  std::vector<std::vector<std::size_t>> z(corpus.rooms.size());

  for (std::size_t d = 0; d < tokens.size(); ++d) {
    z[d].resize(tokens[d].size());
    for (std::size_t i = 0; i < tokens[d].size(); ++i) {
      const std::size_t t = labels[d][rng.uniform_index(labels[d].size())];
      z[d][i] = t;
      n_tw[t * v + tokens[d][i]] += 1.0;
      n_t[t] += 1.0;
      n_dt[d][t] += 1.0;
    }
  }

  const std::size_t burn_in = config.iterations * 4 / 5;
  std::vector<double> phi_accum;
  std::size_t samples = 0;
  if (config.average_samples) phi_accum.assign(u * v, 0.0);

  std::vector<double> weights;
  for (std::size_t iter = 0; iter < config.iterations; ++iter) {
    for (std::size_t d = 0; d < tokens.size(); ++d) {
      const auto& lab = labels[d];
      for (std::size_t i = 0; i < tokens[d].size(); ++i) {
        const std::size_t w = tokens[d][i];
        const std::size_t old_t = z[d][i];
        n_tw[old_t * v + w] -= 1.0;
        n_t[old_t] -= 1.0;
        n_dt[d][old_t] -= 1.0;
        weights.resize(lab.size());
        for (std::size_t k = 0; k < lab.size(); ++k) {
          const std::size_t t = lab[k];
          weights[k] = (n_dt[d][t] + alpha) * (n_tw[t * v + w] + beta) /
                       (n_t[t] + beta * static_cast<double>(v));
        }
        const std::size_t new_t = lab[rng.discrete(weights)];
        z[d][i] = new_t;
        n_tw[new_t * v + w] += 1.0;
        n_t[new_t] += 1.0;
        n_dt[d][new_t] += 1.0;
      }
    }
    if (config.average_samples && iter >= burn_in) {
      for (std::size_t t = 0; t < u; ++t) {
        for (std::size_t w = 0; w < v; ++w) {
          phi_accum[t * v + w] += (n_tw[t * v + w] + beta) /
                                  (n_t[t] + beta * static_cast<double>(v));
        }
      }
      ++samples;
    }
  }

  LldaModel model;
  model.room_types = corpus.room_types.names();
  model.categories = corpus.categories.names();
  model.alpha = alpha;
  model.beta = beta;
  model.iterations = config.iterations;
  model.seed = config.seed;
  model.topic_word_counts = n_tw;
  model.phi.assign(u * v, 0.0);
  for (std::size_t t = 0; t < u; ++t) {
    for (std::size_t w = 0; w < v; ++w) {
      model.phi[t * v + w] =
          config.average_samples && samples > 0
              ? phi_accum[t * v + w] / static_cast<double>(samples)
              : (n_tw[t * v + w] + beta) / (n_t[t] + beta * static_cast<double>(v));
    }
  }
  return model;
}

PosteriorReport predict_room_types(const LldaModel& model,
                                   const std::vector<std::string>& objects, double threshold,
                                   std::uint64_t seed, std::size_t iterations) {
  if (objects.empty()) throw UsageError("prediction requires at least one object");
  const std::size_t u = model.num_room_types();
  const std::size_t v = model.vocab_size();

  PosteriorReport report;
  std::vector<std::size_t> tokens;
  for (const auto& name : objects) {
    auto it = std::find(model.categories.begin(), model.categories.end(), name);
    if (it == model.categories.end()) {
      ++report.unknown_dropped;
    } else {
      tokens.push_back(static_cast<std::size_t>(it - model.categories.begin()));
    }
  }
  if (tokens.empty()) {
    throw IntegrityError("no object category is known to the model (" +
                         std::to_string(report.unknown_dropped) + " dropped)");
  }

  Rng rng(seed);
  std::vector<double> n_dt(u, 0.0);
  std::vector<std::size_t> z(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    z[i] = rng.uniform_index(u);
    n_dt[z[i]] += 1.0;
  }

  const std::size_t burn_in = iterations * 4 / 5;
  std::vector<double> theta_accum(u, 0.0);
  std::size_t samples = 0;
  std::vector<double> weights(u);
  const double n_tokens = static_cast<double>(tokens.size());
  for (std::size_t iter = 0; iter < iterations; ++iter) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const std::size_t w = tokens[i];
      n_dt[z[i]] -= 1.0;
      for (std::size_t t = 0; t < u; ++t) {
        weights[t] = (n_dt[t] + model.alpha) * model.phi[t * v + w];
      }
      z[i] = rng.discrete(weights);
      n_dt[z[i]] += 1.0;
    }
    if (iter >= burn_in) {
      for (std::size_t t = 0; t < u; ++t) {
        theta_accum[t] += (n_dt[t] + model.alpha) /
                          (n_tokens + model.alpha * static_cast<double>(u));
      }
      ++samples;
    }
  }

  report.theta.assign(u, 0.0);
  double total = 0.0;
  for (std::size_t t = 0; t < u; ++t) {
    report.theta[t] = theta_accum[t] / static_cast<double>(samples);
    total += report.theta[t];
  }
  for (double& x : report.theta) x /= total;

  for (std::size_t t = 0; t < u; ++t) {
    if (report.theta[t] >= threshold) report.predicted.push_back(model.room_types[t]);
  }
  if (report.predicted.empty()) {
    const std::size_t best =
        std::max_element(report.theta.begin(), report.theta.end()) - report.theta.begin();
    report.predicted.push_back(model.room_types[best]);
  }
  return report;
}

std::vector<double> hybrid_occurrence(const LldaModel& model,
                                      const std::vector<std::string>& labels) {
  if (labels.empty()) throw UsageError("hybrid occurrence requires a non-empty label set");
  const std::size_t v = model.vocab_size();
  std::vector<double> sum(v, 0.0);
  std::set<std::string> seen;
  for (const auto& label : labels) {
    if (!seen.insert(label).second) continue;
    const std::size_t t = model.room_type_index(label);
    for (std::size_t w = 0; w < v; ++w) sum[w] += model.phi[t * v + w];
  }
  return sum;
}

LldaModel load_model(const std::string& path) {
  const nlohmann::json doc = load_json_file(path);
  check_schema(doc, "model " + path);
  LldaModel model;
  for (const auto& n : doc.at("room_types")) model.room_types.push_back(n.get<std::string>());
  for (const auto& n : doc.at("categories")) model.categories.push_back(n.get<std::string>());
  model.alpha = doc.at("alpha").get<double>();
  model.beta = doc.at("beta").get<double>();
  model.iterations = doc.at("iterations").get<std::size_t>();
  model.seed = doc.at("seed").get<std::uint64_t>();
  const std::size_t u = model.room_types.size();
  const std::size_t v = model.categories.size();
  for (const auto& row : doc.at("phi")) {
    for (const auto& x : row) model.phi.push_back(x.get<double>());
  }
  for (const auto& row : doc.at("topic_word_counts")) {
    for (const auto& x : row) model.topic_word_counts.push_back(x.get<double>());
  }
  if (model.phi.size() != u * v || model.topic_word_counts.size() != u * v) {
    throw ParseError("model " + path + ": phi/count dimensions do not match the vocabularies");
  }
  return model;
}

void save_model(const LldaModel& model, const std::string& path) {
  nlohmann::json doc;
  doc["schema_version"] = kSchemaMajor;
  doc["room_types"] = model.room_types;
  doc["categories"] = model.categories;
  doc["alpha"] = model.alpha;
  doc["beta"] = model.beta;
  doc["iterations"] = model.iterations;
  doc["seed"] = model.seed;
  const std::size_t u = model.room_types.size();
  const std::size_t v = model.categories.size();
  nlohmann::json phi = nlohmann::json::array();
  nlohmann::json counts = nlohmann::json::array();
  for (std::size_t t = 0; t < u; ++t) {
    phi.push_back(std::vector<double>(model.phi.begin() + t * v, model.phi.begin() + (t + 1) * v));
    counts.push_back(std::vector<double>(model.topic_word_counts.begin() + t * v,
                                         model.topic_word_counts.begin() + (t + 1) * v));
  }
  doc["phi"] = std::move(phi);
  doc["topic_word_counts"] = std::move(counts);
  save_json_file(doc, path);
}

}  // namespace roomrec
