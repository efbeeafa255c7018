#include "roomrec/embeddings.hpp"

#include <algorithm>
#include <cmath>

#include "roomrec/rng.hpp"

namespace roomrec {

std::size_t EmbeddingSet::category_index(const std::string& name) const {
  auto it = std::find(categories.begin(), categories.end(), name);
  if (it == categories.end()) {
    throw IntegrityError("category '" + name + "' has no embedding");
  }
  return static_cast<std::size_t>(it - categories.begin());
}

double cooccurrence_weight(double x, double x_max, double exponent) {
  return x < x_max ? std::pow(x / x_max, exponent) : 1.0;
}

EmbeddingSet train_embeddings(const SquareMatrix& cooccurrence,
                              const std::vector<std::string>& categories,
                              const EmbeddingConfig& config) {
  const std::size_t v = categories.size();
  if (cooccurrence.n != v) {
    throw UsageError("co-occurrence matrix size does not match the category list");
  }
  if (config.dim < 2) throw UsageError("embedding dimension must be >= 2");

  struct Pair {
    std::size_t i, j;
    double weight, target;
  };
  std::vector<Pair> pairs;
  EmbeddingSet emb;
  emb.categories = categories;
  emb.config = config;
  emb.cooccurrence_mask.assign(v * v, 0);
  for (std::size_t i = 0; i < v; ++i) {
    for (std::size_t j = 0; j < v; ++j) {
      const double c = cooccurrence.at(i, j);
      if (c > 0.0) {
        emb.cooccurrence_mask[i * v + j] = 1;
        if (i < j) {
          pairs.push_back({i, j, cooccurrence_weight(c, config.x_max, config.exponent),
                           std::log(c)});
        }
      }
    }
  }
  if (pairs.empty()) throw IntegrityError("co-occurrence matrix has no off-diagonal mass");

  const std::size_t d = config.dim;
  Rng rng(config.seed);
  emb.vectors.assign(v * d, 0.0);
  emb.bias.assign(v, 0.0);
  for (double& x : emb.vectors) x = (rng.uniform() - 0.5) / static_cast<double>(d);
  for (double& x : emb.bias) x = (rng.uniform() - 0.5) / static_cast<double>(d);

  // AdaGrad accumulators.
  std::vector<double> grad_sq_vec(v * d, 1.0);
  std::vector<double> grad_sq_bias(v, 1.0);
  std::vector<double> gi(d), gj(d);

  for (std::size_t epoch = 0; epoch < config.iterations; ++epoch) {
    rng.shuffle(pairs);
    double objective = 0.0;
    for (const auto& p : pairs) {
      double* wi = emb.vectors.data() + p.i * d;
      double* wj = emb.vectors.data() + p.j * d;
      double dot = 0.0;
      for (std::size_t k = 0; k < d; ++k) dot += wi[k] * wj[k];
      const double diff = dot + emb.bias[p.i] + emb.bias[p.j] - p.target;
      objective += p.weight * diff * diff;
      const double scale = 2.0 * p.weight * diff;
      for (std::size_t k = 0; k < d; ++k) {
        gi[k] = scale * wj[k];
        gj[k] = scale * wi[k];
      }
      for (std::size_t k = 0; k < d; ++k) {
        grad_sq_vec[p.i * d + k] += gi[k] * gi[k];
        wi[k] -= config.learning_rate * gi[k] / std::sqrt(grad_sq_vec[p.i * d + k]);
        grad_sq_vec[p.j * d + k] += gj[k] * gj[k];
        wj[k] -= config.learning_rate * gj[k] / std::sqrt(grad_sq_vec[p.j * d + k]);
      }
      grad_sq_bias[p.i] += scale * scale;
      emb.bias[p.i] -= config.learning_rate * scale / std::sqrt(grad_sq_bias[p.i]);
      grad_sq_bias[p.j] += scale * scale;
      emb.bias[p.j] -= config.learning_rate * scale / std::sqrt(grad_sq_bias[p.j]);
    }
    emb.objective_history.push_back(objective);
  }
  return emb;
}

double pairwise_similarity(const EmbeddingSet& emb, const std::string& i, const std::string& j) {
  const std::size_t a = emb.category_index(i);
  const std::size_t b = emb.category_index(j);
  const std::size_t d = emb.config.dim;
  const double* wa = emb.vectors.data() + a * d;
  const double* wb = emb.vectors.data() + b * d;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    dot += wa[k] * wb[k];
    na += wa[k] * wa[k];
    nb += wb[k] * wb[k];
  }
  if (na == 0.0 || nb == 0.0) {
    throw IntegrityError("zero-norm embedding vector for '" + (na == 0.0 ? i : j) + "'");
  }
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

}  // namespace roomrec
