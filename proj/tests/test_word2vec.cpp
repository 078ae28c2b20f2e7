#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "vulnwatch/errors.hpp"
#include "vulnwatch/word2vec.hpp"

using namespace vulnwatch;
using testsupport::TempFile;

namespace {

std::vector<TokenizedDoc> docs_from(const std::vector<std::vector<std::string>>& lists) {
  std::vector<TokenizedDoc> docs(lists.size());
  for (std::size_t i = 0; i < lists.size(); ++i) {
    docs[i].doc_id = std::to_string(i);
    docs[i].tokens = lists[i];
  }
  return docs;
}

// Sentences where "cve" and "patch" share contexts and "banana" lives in a
// disjoint food world.
std::vector<TokenizedDoc> co_occurrence_fixture() {
  std::vector<std::vector<std::string>> lists;
  for (int i = 0; i < 60; ++i) {
    lists.push_back({"cve", "patch", "server", "fix"});
    lists.push_back({"patch", "cve", "exploit", "fix"});
    lists.push_back({"banana", "smoothie", "beach", "sun"});
    lists.push_back({"smoothie", "banana", "sun", "beach"});
  }
  return docs_from(lists);
}

double max_relative_gradient_error(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.8, 0.8);
  const std::size_t dim = 6;
  const double eps = 1e-5;
  double worst = 0.0;

  std::vector<double> center(dim), context(dim);
  std::vector<std::vector<double>> negatives(3, std::vector<double>(dim));
  for (auto& v : center) v = dist(rng);
  for (auto& v : context) v = dist(rng);
  for (auto& neg : negatives)
    for (auto& v : neg) v = dist(rng);

  const auto grads = sgns_gradients(center, context, negatives);

  auto check = [&](std::vector<double>& vec, const std::vector<double>& grad) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double keep = vec[d];
      vec[d] = keep + eps;
      const double up = sgns_loss(center, context, negatives);
      vec[d] = keep - eps;
      const double down = sgns_loss(center, context, negatives);
      vec[d] = keep;
      const double numeric = (up - down) / (2 * eps);
      const double denom = std::max({std::abs(numeric), std::abs(grad[d]), 1e-8});
      worst = std::max(worst, std::abs(numeric - grad[d]) / denom);
    }
  };
  check(center, grads.d_center);
  check(context, grads.d_context);
  for (std::size_t n = 0; n < negatives.size(); ++n)
    check(negatives[n], grads.d_negatives[n]);
  return worst;
}

}  // namespace

TEST_CASE("sgns loss hand value at the origin") {
  // All dot products zero: loss = (2 + #neg) * ln 2 pieces -> softplus(0) each.
  const std::vector<double> zero(4, 0.0);
  const std::vector<std::vector<double>> negatives(3, zero);
  const double expected = 4 * std::log(2.0);  // positive + three negatives
  CHECK(sgns_loss(zero, zero, negatives) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("sgns loss decreases as the positive pair aligns") {
  const std::vector<double> context = {1.0, 0.0};
  const std::vector<std::vector<double>> negatives;
  const std::vector<double> apart = {-1.0, 0.0};
  const std::vector<double> aligned = {1.0, 0.0};
  CHECK(sgns_loss(aligned, context, negatives) < sgns_loss(apart, context, negatives));
}

TEST_CASE("analytic gradients match central differences") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull})
    CHECK(max_relative_gradient_error(seed) < 1e-4);
}

TEST_CASE("gradient shape mismatches throw") {
  const std::vector<double> a(4, 0.1), b(5, 0.1);
  CHECK_THROWS_AS(sgns_gradients(a, b, {}), std::invalid_argument);
  const std::vector<std::vector<double>> bad_neg = {std::vector<double>(3, 0.0)};
  CHECK_THROWS_AS(sgns_gradients(a, a, bad_neg), std::invalid_argument);
}

TEST_CASE("vocabulary ordering is frequency desc then term asc") {
  const auto docs = docs_from({
      {"bb", "bb", "bb", "aa", "aa", "zz", "zz", "mm"},
  });
  EmbeddingHyperparams hp;
  hp.dim = 4;
  hp.min_count = 2;
  hp.epochs = 1;
  const auto model = train_word2vec(docs, hp);
  CHECK(model.terms == std::vector<std::string>{"bb", "aa", "zz"});  // mm pruned
  CHECK(model.frequency == std::vector<std::uint64_t>{3, 2, 2});
  CHECK(model.find("bb") == 0u);
  CHECK_FALSE(model.find("mm").has_value());
}

TEST_CASE("training is deterministic per seed") {
  const auto docs = co_occurrence_fixture();
  EmbeddingHyperparams hp;
  hp.dim = 12;
  hp.min_count = 1;
  hp.epochs = 2;
  hp.seed = 99;
  const auto a = train_word2vec(docs, hp);
  const auto b = train_word2vec(docs, hp);
  CHECK(a.input_vectors == b.input_vectors);  // bit-identical
  CHECK(a.output_vectors == b.output_vectors);

  hp.seed = 100;
  const auto c = train_word2vec(docs, hp);
  CHECK(a.input_vectors != c.input_vectors);
}

TEST_CASE("co-occurrence geometry: cve sits nearer patch than banana") {
  const auto docs = co_occurrence_fixture();
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EmbeddingHyperparams hp;
    hp.dim = 16;
    hp.min_count = 1;
    hp.epochs = 8;
    hp.seed = seed;
    const auto model = train_word2vec(docs, hp);
    if (cosine_similarity(model, "cve", "patch") >
        cosine_similarity(model, "cve", "banana"))
      ++wins;
  }
  CHECK(wins >= 4);
}

TEST_CASE("hyperparameter validation") {
  const auto docs = co_occurrence_fixture();
  EmbeddingHyperparams hp;
  hp.dim = 1;
  CHECK_THROWS_AS(train_word2vec(docs, hp), std::invalid_argument);
  hp = {};
  hp.epochs = 0;
  CHECK_THROWS_AS(train_word2vec(docs, hp), std::invalid_argument);
  hp = {};
  hp.min_learning_rate = 1.0;  // above learning_rate
  CHECK_THROWS_AS(train_word2vec(docs, hp), std::invalid_argument);
  hp = {};
  hp.min_count = 1000;  // prunes everything
  CHECK_THROWS_AS(train_word2vec(docs, hp), std::invalid_argument);
  CHECK_THROWS_AS(train_word2vec({}, {}), std::invalid_argument);
}

TEST_CASE("cosine similarity contract") {
  const auto docs = co_occurrence_fixture();
  EmbeddingHyperparams hp;
  hp.dim = 8;
  hp.min_count = 1;
  hp.epochs = 1;
  const auto model = train_word2vec(docs, hp);
  CHECK(cosine_similarity(model, "cve", "cve") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cosine_similarity(model, "cve", "patch") ==
        doctest::Approx(cosine_similarity(model, "patch", "cve")).epsilon(1e-12));
  CHECK_THROWS_AS(cosine_similarity(model, "cve", "nonexistent"),
                  std::invalid_argument);
}

TEST_CASE("embeddings survive a save and load round trip") {
  const auto docs = co_occurrence_fixture();
  EmbeddingHyperparams hp;
  hp.dim = 8;
  hp.min_count = 1;
  hp.epochs = 1;
  const auto model = train_word2vec(docs, hp);
  TempFile f("embeddings");
  save_embeddings(model, f.path);
  const auto back = load_embeddings(f.path);
  CHECK(back.terms == model.terms);
  REQUIRE(back.input_vectors.size() == model.input_vectors.size());
  for (std::size_t i = 0; i < model.input_vectors.size(); ++i)
    for (std::size_t d = 0; d < hp.dim; ++d)
      CHECK(back.input_vectors[i][d] == model.input_vectors[i][d]);  // exact
  CHECK(back.hyperparams.dim == hp.dim);
}

TEST_CASE("load_embeddings rejects corrupt files") {
  TempFile bad1("emb-bad1", "nonsense\n");
  CHECK_THROWS_AS(load_embeddings(bad1.path), DataError);
  TempFile bad2("emb-bad2", "dim=3 vocab=1\nterm 0.1 0.2\n");  // short row
  CHECK_THROWS_AS(load_embeddings(bad2.path), DataError);
  TempFile bad3("emb-bad3", "dim=3 vocab=2\nterm 0.1 0.2 0.3\n");  // missing row
  CHECK_THROWS_AS(load_embeddings(bad3.path), DataError);
  TempFile bad4("emb-bad4", "dim=3 vocab=2\na 0.1 0.2 0.3\na 0.1 0.2 0.3\n");
  CHECK_THROWS_AS(load_embeddings(bad4.path), DataError);  // duplicate term
  TempFile bad5("emb-bad5", "dim=3 vocab=1\nterm 0.1 nan 0.3\n");
  CHECK_THROWS_AS(load_embeddings(bad5.path), DataError);  // non-finite
  CHECK_THROWS_AS(load_embeddings("missing-embeddings.txt"), DataError);
}
