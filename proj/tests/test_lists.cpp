#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include "roomrec/lists.hpp"
#include "roomrec/synthetic.hpp"

using namespace roomrec;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "roomrec_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

// Embeddings with planted substitute pairs: train on a synthetic corpus and
// return (embeddings, category names). Pair (0,1) [and optionally (2,3)]
// share contexts and never co-occur.
EmbeddingSet substitute_embeddings(std::size_t num_pairs, std::vector<std::string>& names) {
  GeneratorSpec spec;
  spec.rooms_per_type = 150;
  spec.objects_per_room = 15;
  spec.substitute_pairs = {{0, 1}};
  if (num_pairs > 1) spec.substitute_pairs.push_back({2, 3});
  const SyntheticCorpus synth = generate_synthetic_corpus(31, spec);
  names = synth.corpus.categories.names();
  EmbeddingConfig config;
  config.dim = 8;
  config.iterations = 200;
  config.seed = 1;
  return train_embeddings(count_cooccurrence(synth.corpus), names, config);
}

KnowledgeTable flat_knowledge(const std::vector<std::string>& categories,
                              const std::vector<std::string>& room_types, double score) {
  KnowledgeTable table;
  table.categories = categories;
  table.room_types = room_types;
  table.scores.assign(categories.size() * room_types.size(), score);
  return table;
}

}  // namespace

TEST_CASE("label set key is order-insensitive and deduplicated") {
  CHECK(label_set_key({"living", "dining"}) == label_set_key({"dining", "living"}));
  CHECK(label_set_key({"bedroom"}) == "bedroom");
  CHECK(label_set_key({"a", "b"}) == "a+b");
}

TEST_CASE("split keeps a list without substitutes intact") {
  std::vector<std::string> names;
  const EmbeddingSet emb = substitute_embeddings(1, names);
  RecommendationList list;
  list.list_id = "base";
  list.room_types = {"type0"};
  // Categories 5..9 have no substitute relation among themselves.
  for (std::size_t i = 5; i < 10; ++i) list.entries.push_back({names[i], 0.1, 1, 2});
  const auto result = split_list(list, emb, 0.95);
  REQUIRE(result.size() == 1);
  CHECK(result[0].list_id == "base");
  CHECK(result[0].entries.size() == 5);
}

TEST_CASE("one substitute pair splits into two lists sharing everything else") {
  std::vector<std::string> names;
  const EmbeddingSet emb = substitute_embeddings(1, names);
  RecommendationList list;
  list.list_id = "L";
  list.room_types = {"type0"};
  list.entries.push_back({names[0], 0.3, 1, 1});  // pair member a
  list.entries.push_back({names[1], 0.3, 1, 1});  // pair member b
  list.entries.push_back({names[5], 0.2, 1, 2});
  list.entries.push_back({names[6], 0.1, 0, 2});
  const auto result = split_list(list, emb, 0.95);
  REQUIRE(result.size() == 2);
  std::set<std::string> a_cats, b_cats;
  for (const auto& e : result[0].entries) a_cats.insert(e.category);
  for (const auto& e : result[1].entries) b_cats.insert(e.category);
  // Pair members are separated; shared categories are duplicated.
  CHECK(a_cats.count(names[0]) + b_cats.count(names[0]) == 1);
  CHECK(a_cats.count(names[1]) + b_cats.count(names[1]) == 1);
  CHECK(a_cats.count(names[0]) != b_cats.count(names[0]));
  CHECK(a_cats.count(names[5]) == 1);
  CHECK(b_cats.count(names[5]) == 1);
  CHECK(a_cats.count(names[6]) == 1);
  CHECK(b_cats.count(names[6]) == 1);
  CHECK(result[0].list_id != result[1].list_id);
}

TEST_CASE("two substitute pairs split into four lists covering all combinations") {
  std::vector<std::string> names;
  const EmbeddingSet emb = substitute_embeddings(2, names);
  RecommendationList list;
  list.list_id = "L";
  list.room_types = {"type0"};
  for (std::size_t i : {std::size_t{0}, std::size_t{1}, std::size_t{2}, std::size_t{3},
                        std::size_t{6}}) {
    list.entries.push_back({names[i], 0.2, 1, 1});
  }
  const auto result = split_list(list, emb, 0.95);
  REQUIRE(result.size() == 4);
  std::set<std::pair<bool, bool>> combos;
  std::set<std::string> ids;
  for (const auto& r : result) {
    std::set<std::string> cats;
    for (const auto& e : r.entries) cats.insert(e.category);
    // Exactly one member of each pair plus the shared category.
    CHECK(cats.count(names[0]) + cats.count(names[1]) == 1);
    CHECK(cats.count(names[2]) + cats.count(names[3]) == 1);
    CHECK(cats.count(names[6]) == 1);
    combos.insert({cats.count(names[0]) == 1, cats.count(names[2]) == 1});
    ids.insert(r.list_id);
  }
  CHECK(combos.size() == 4);  // all member combinations exist
  CHECK(ids.size() == 4);     // unique list ids
}

TEST_CASE("match expectation is the probability-weighted score sum") {
  const KnowledgeTable table = [] {
    KnowledgeTable t;
    t.categories = {"bed", "desk"};
    t.room_types = {"bedroom", "study"};
    t.scores = {5.0, 1.0, 2.0, 4.0};
    return t;
  }();
  RecommendationList list;
  list.entries.push_back({"bed", 0.6, 1, 1});
  list.entries.push_back({"desk", 0.4, 1, 1});
  CHECK(match_expectation(list, {"bedroom"}, table) == doctest::Approx(0.6 * 5.0 + 0.4 * 2.0));
  // Hybrid label sets score each category at its best type.
  CHECK(match_expectation(list, {"bedroom", "study"}, table) ==
        doctest::Approx(0.6 * 5.0 + 0.4 * 4.0));
  RecommendationList unknown;
  unknown.entries.push_back({"pool_table", 1.0, 1, 1});
  CHECK_THROWS_AS((void)match_expectation(unknown, {"bedroom"}, table), IntegrityError);
}

TEST_CASE("candidate lists take top-k categories with knowledge-derived count bounds") {
  GeneratorSpec spec;
  spec.rooms_per_type = 60;
  spec.objects_per_room = 12;
  const SyntheticCorpus synth = generate_synthetic_corpus(7, spec);
  LldaConfig lc;
  lc.iterations = 40;
  const LldaModel model = train_llda(synth.corpus, lc);
  EmbeddingConfig ec;
  ec.dim = 4;
  ec.iterations = 10;
  const EmbeddingSet emb =
      train_embeddings(count_cooccurrence(synth.corpus), synth.corpus.categories.names(), ec);
  const CountPrior priors = count_instance_priors(synth.corpus);

  // Low knowledge scores (<= 2.5) allow a zero lower bound; high scores
  // force at least one instance.
  auto run = [&](double score) {
    const KnowledgeTable knowledge =
        flat_knowledge(synth.corpus.categories.names(), synth.corpus.room_types.names(), score);
    const std::vector<std::string> labels = {synth.corpus.room_types.name(0)};
    return build_candidate_lists(model, {labels}, emb, knowledge, priors, 5);
  };
  const auto low = run(2.0);
  const auto high = run(4.0);
  REQUIRE(low.size() == 1);
  const auto& low_lists = low.begin()->second;
  const auto& high_lists = high.begin()->second;
  REQUIRE(!low_lists.empty());
  for (const auto& list : low_lists) {
    CHECK(list.entries.size() == 5);
    for (const auto& e : list.entries) {
      CHECK(e.count_lo == 0);
      CHECK(e.count_hi >= e.count_lo);
    }
    // Entries are the top-k by occurrence probability: sorted descending.
    for (std::size_t i = 1; i < list.entries.size(); ++i) {
      CHECK(list.entries[i - 1].probability >= list.entries[i].probability);
    }
  }
  for (const auto& list : high_lists) {
    for (const auto& e : list.entries) {
      if (e.count_hi > 0) CHECK(e.count_lo == 1);
    }
  }
}

TEST_CASE("assignment with lambda=0 repeats the best list; lambda=1 forces distinct lists") {
  // Two same-type rooms, two candidate lists with different expectations.
  KnowledgeTable table;
  table.categories = {"bed", "desk", "wardrobe"};
  table.room_types = {"bedroom"};
  table.scores = {5.0, 3.0, 4.0};

  RecommendationList best;
  best.list_id = "best";
  best.room_types = {"bedroom"};
  best.entries.push_back({"bed", 0.7, 1, 1});
  best.entries.push_back({"wardrobe", 0.3, 1, 1});
  RecommendationList second;
  second.list_id = "second";
  second.room_types = {"bedroom"};
  second.entries.push_back({"bed", 0.7, 1, 1});
  second.entries.push_back({"desk", 0.3, 1, 1});

  Residence residence;
  residence.rooms.push_back({"roomA", {"bedroom"}, 14.0});
  residence.rooms.push_back({"roomB", {"bedroom"}, 12.0});
  CandidateLists candidates;
  candidates["bedroom"] = {best, second};

  const ListAssignment repeat = assign_lists(residence, candidates, table, 0.0);
  CHECK(repeat.list_of_room.at("roomA") == "best");
  CHECK(repeat.list_of_room.at("roomB") == "best");
  CHECK(repeat.h2 == 0.0);

  const ListAssignment distinct = assign_lists(residence, candidates, table, 1.0);
  CHECK(distinct.list_of_room.at("roomA") != distinct.list_of_room.at("roomB"));
  CHECK(distinct.h2 > 0.0);
  // H1 of the distinct assignment cannot beat twice the best list.
  CHECK(distinct.h1 <= repeat.h1 + 1e-12);
}

TEST_CASE("assignment objective matches an independent exhaustive oracle") {
  // Two rooms of a repeated type plus one singleton room. H1 covers the
  // singleton, H2 the repeated pair under the distinctness constraint.
  KnowledgeTable table;
  table.categories = {"a", "b", "c", "d", "x"};
  table.room_types = {"t", "u"};
  table.scores = {4.0, 0.0, 3.0, 0.0, 2.0, 0.0, 1.0, 0.0, 0.0, 5.0};

  std::vector<RecommendationList> t_lists(3);
  const char* ids[3] = {"l0", "l1", "l2"};
  const char* cats[3][2] = {{"a", "b"}, {"b", "c"}, {"c", "d"}};
  for (int i = 0; i < 3; ++i) {
    t_lists[i].list_id = ids[i];
    t_lists[i].room_types = {"t"};
    t_lists[i].entries.push_back({cats[i][0], 0.5, 1, 1});
    t_lists[i].entries.push_back({cats[i][1], 0.5, 1, 1});
  }
  RecommendationList u_list;
  u_list.list_id = "u0";
  u_list.room_types = {"u"};
  u_list.entries.push_back({"x", 1.0, 1, 1});

  Residence residence;
  residence.rooms.push_back({"r0", {"t"}, 10.0});
  residence.rooms.push_back({"r1", {"t"}, 10.0});
  residence.rooms.push_back({"ru", {"u"}, 10.0});
  CandidateLists candidates;
  candidates["t"] = t_lists;
  candidates["u"] = {u_list};

  const ListAssignment got = assign_lists(residence, candidates, table, 1.0);

  // Oracle: H1 = 5 (singleton); H2 = best distinct pair of t-list
  // expectations e = {3.5, 2.5, 1.5} -> 3.5 + 2.5.
  const double e[3] = {0.5 * 4 + 0.5 * 3, 0.5 * 3 + 0.5 * 2, 0.5 * 2 + 0.5 * 1};
  double best_h2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j) best_h2 = std::max(best_h2, e[i] + e[j]);
    }
  }
  CHECK(got.h1 == doctest::Approx(5.0));
  CHECK(got.h2 == doctest::Approx(best_h2));
  CHECK(got.objective == doctest::Approx(5.0 + best_h2).epsilon(1e-9));
  CHECK(got.list_of_room.at("r0") != got.list_of_room.at("r1"));
  CHECK(got.list_of_room.at("ru") == "u0");
}

TEST_CASE("forced reuse is allowed when candidates run out and contributes zero") {
  KnowledgeTable table;
  table.categories = {"a", "b"};
  table.room_types = {"t"};
  table.scores = {4.0, 2.0};
  RecommendationList only;
  only.list_id = "only";
  only.room_types = {"t"};
  only.entries.push_back({"a", 0.5, 1, 1});
  only.entries.push_back({"b", 0.5, 1, 1});
  Residence residence;
  residence.rooms.push_back({"r0", {"t"}, 10.0});
  residence.rooms.push_back({"r1", {"t"}, 10.0});
  residence.rooms.push_back({"r2", {"t"}, 10.0});
  CandidateLists candidates;
  candidates["t"] = {only};
  const ListAssignment got = assign_lists(residence, candidates, table, 1.0);
  CHECK(got.list_of_room.at("r0") == "only");
  CHECK(got.list_of_room.at("r2") == "only");
  // One fresh use counts; the two duplicates contribute 0.
  CHECK(got.h2 == doctest::Approx(0.5 * 4 + 0.5 * 2));
}

TEST_CASE("residence and room-list json roundtrips") {
  Residence residence;
  residence.rooms.push_back({"r0", {"bedroom"}, 15.5});
  residence.rooms.push_back({"r1", {"living", "dining"}, 32.0});
  const auto path = temp_file("residence.json");
  save_residence(residence, path.string());
  const Residence loaded = load_residence(path.string());
  REQUIRE(loaded.rooms.size() == 2);
  CHECK(loaded.rooms[1].labels == residence.rooms[1].labels);
  CHECK(loaded.rooms[1].floor_area == 32.0);

  RoomLists lists;
  lists.residence = residence;
  RecommendationList l;
  l.list_id = "x";
  l.room_types = {"bedroom"};
  l.entries.push_back({"bed", 0.9, 1, 2});
  lists.list_of_room["r0"] = l;
  lists.list_of_room["r1"] = l;
  lists.objective = 3.5;
  lists.h1 = 3.0;
  lists.h2 = 0.5;
  const auto lpath = temp_file("lists.json");
  save_room_lists(lists, lpath.string());
  const RoomLists loaded_lists = load_room_lists(lpath.string());
  CHECK(loaded_lists.objective == 3.5);
  CHECK(loaded_lists.list_of_room.at("r0").entries[0].category == "bed");
  CHECK(loaded_lists.list_of_room.at("r0").entries[0].count_hi == 2);
}
