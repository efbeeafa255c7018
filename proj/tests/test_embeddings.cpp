#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "roomrec/embeddings.hpp"
#include "roomrec/synthetic.hpp"

using namespace roomrec;

TEST_CASE("co-occurrence weighting function matches hand-computed values") {
  // (x/x_max)^a below the cutoff, 1 above.
  CHECK(cooccurrence_weight(100.0, 100.0, 0.75) == doctest::Approx(1.0));
  CHECK(cooccurrence_weight(250.0, 100.0, 0.75) == doctest::Approx(1.0));
  CHECK(cooccurrence_weight(50.0, 100.0, 0.75) == doctest::Approx(std::pow(0.5, 0.75)));
  CHECK(cooccurrence_weight(1.0, 100.0, 0.75) == doctest::Approx(std::pow(0.01, 0.75)));
  CHECK(cooccurrence_weight(16.0, 64.0, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("training rejects bad inputs") {
  SquareMatrix C(3);
  std::vector<std::string> names = {"a", "b", "c"};
  EmbeddingConfig config;
  config.dim = 4;
  config.iterations = 5;

  SUBCASE("size mismatch") {
    CHECK_THROWS_AS((void)train_embeddings(C, {"a", "b"}, config), UsageError);
  }
  SUBCASE("no off-diagonal mass") {
    C.at(0, 0) = 3.0;
    CHECK_THROWS_AS((void)train_embeddings(C, names, config), IntegrityError);
  }
  SUBCASE("dimension too small") {
    C.at(0, 1) = C.at(1, 0) = 1.0;
    config.dim = 1;
    CHECK_THROWS_AS((void)train_embeddings(C, names, config), UsageError);
  }
}

TEST_CASE("objective decreases and training is deterministic") {
  GeneratorSpec spec;
  spec.rooms_per_type = 60;
  spec.objects_per_room = 12;
  const SyntheticCorpus synth = generate_synthetic_corpus(19, spec);
  const SquareMatrix C = count_cooccurrence(synth.corpus);
  EmbeddingConfig config;
  config.dim = 8;
  config.iterations = 40;
  config.seed = 4;
  const EmbeddingSet a = train_embeddings(C, synth.corpus.categories.names(), config);
  const EmbeddingSet b = train_embeddings(C, synth.corpus.categories.names(), config);
  CHECK(a.vectors == b.vectors);
  REQUIRE(a.objective_history.size() == config.iterations);
  CHECK(a.objective_history.back() < a.objective_history.front());
  // Mostly monotone: allow a few SGD wobbles.
  std::size_t increases = 0;
  for (std::size_t i = 1; i < a.objective_history.size(); ++i) {
    if (a.objective_history[i] > a.objective_history[i - 1]) ++increases;
  }
  CHECK(increases < a.objective_history.size() / 4);
}

TEST_CASE("cosine similarity is symmetric, bounded, and 1 on the diagonal") {
  GeneratorSpec spec;
  spec.rooms_per_type = 40;
  spec.objects_per_room = 10;
  const SyntheticCorpus synth = generate_synthetic_corpus(23, spec);
  const SquareMatrix C = count_cooccurrence(synth.corpus);
  EmbeddingConfig config;
  config.dim = 8;
  config.iterations = 30;
  const EmbeddingSet emb = train_embeddings(C, synth.corpus.categories.names(), config);
  const auto& names = emb.categories;
  for (std::size_t i = 0; i < names.size(); i += 3) {
    CHECK(pairwise_similarity(emb, names[i], names[i]) == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t j = i + 1; j < names.size(); j += 5) {
      const double s = pairwise_similarity(emb, names[i], names[j]);
      CHECK(s == pairwise_similarity(emb, names[j], names[i]));
      CHECK(s >= -1.0);
      CHECK(s <= 1.0);
    }
  }
  CHECK_THROWS_AS((void)pairwise_similarity(emb, "nope", names[0]), IntegrityError);
}

TEST_CASE("substitute pairs end up highly similar without co-occurring") {
  GeneratorSpec spec;
  spec.rooms_per_type = 150;
  spec.objects_per_room = 15;
  spec.substitute_pairs = {{0, 1}};
  const SyntheticCorpus synth = generate_synthetic_corpus(31, spec);
  const SquareMatrix C = count_cooccurrence(synth.corpus);
  const std::string a = synth.corpus.categories.name(0);
  const std::string b = synth.corpus.categories.name(1);
  CHECK(C.at(0, 1) == 0.0);

  EmbeddingConfig config;
  config.dim = 8;
  config.iterations = 200;
  config.seed = 1;
  const EmbeddingSet emb = train_embeddings(C, synth.corpus.categories.names(), config);
  CHECK(!emb.cooccurred(emb.category_index(a), emb.category_index(b)));
  CHECK(pairwise_similarity(emb, a, b) >= 0.95);

  // An arbitrary non-substitute pair should sit measurably lower.
  const std::string other = synth.corpus.categories.name(5);
  CHECK(pairwise_similarity(emb, a, other) < pairwise_similarity(emb, a, b));
}

TEST_CASE("cooccurrence mask mirrors the count matrix") {
  GeneratorSpec spec;
  spec.rooms_per_type = 25;
  spec.objects_per_room = 8;
  const SyntheticCorpus synth = generate_synthetic_corpus(14, spec);
  const SquareMatrix C = count_cooccurrence(synth.corpus);
  EmbeddingConfig config;
  config.dim = 4;
  config.iterations = 5;
  const EmbeddingSet emb = train_embeddings(C, synth.corpus.categories.names(), config);
  for (std::size_t i = 0; i < C.n; ++i) {
    for (std::size_t j = 0; j < C.n; ++j) {
      const std::size_t ei = emb.category_index(synth.corpus.categories.name(i));
      const std::size_t ej = emb.category_index(synth.corpus.categories.name(j));
      CHECK(emb.cooccurred(ei, ej) == (C.at(i, j) > 0.0));
    }
  }
}
