#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <string>
#include <vector>

#include "vulnwatch/corpus.hpp"
#include "vulnwatch/cve.hpp"
#include "vulnwatch/errors.hpp"
#include "vulnwatch/evaluation.hpp"
#include "vulnwatch/kmeans.hpp"
#include "vulnwatch/relevance.hpp"
#include "vulnwatch/report.hpp"
#include "vulnwatch/scorer.hpp"
#include "vulnwatch/stopwords.hpp"
#include "vulnwatch/tfidf.hpp"
#include "vulnwatch/tokenize.hpp"
#include "vulnwatch/topics.hpp"
#include "vulnwatch/word2vec.hpp"

namespace py = pybind11;
using namespace vulnwatch;

namespace {

std::vector<TokenizedDoc> to_docs(const std::vector<std::vector<std::string>>& token_lists) {
  std::vector<TokenizedDoc> docs(token_lists.size());
  for (std::size_t i = 0; i < token_lists.size(); ++i) {
    docs[i].doc_id = std::to_string(i);
    docs[i].tokens = token_lists[i];
  }
  return docs;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "vulnwatch: unsupervised cyber-relevance mining over tweet archives";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<DataError>(m, "DataError");
  py::register_exception<ExternalServiceError>(m, "ExternalServiceError");

  py::class_<Tweet>(m, "Tweet")
      .def(py::init([](std::string id, std::int64_t created_at, std::string text,
                       std::string lang, std::vector<std::string> urls,
                       std::optional<std::string> author_id) {
             Tweet t;
             t.id = std::move(id);
             t.created_at = created_at;
             t.text = std::move(text);
             t.lang = std::move(lang);
             t.urls = std::move(urls);
             t.author_id = std::move(author_id);
             return t;
           }),
           py::arg("id"), py::arg("created_at"), py::arg("text"),
           py::arg("lang") = "en", py::arg("urls") = std::vector<std::string>{},
           py::arg("author_id") = std::nullopt)
      .def_readwrite("id", &Tweet::id)
      .def_readwrite("created_at", &Tweet::created_at)
      .def_readwrite("text", &Tweet::text)
      .def_readwrite("lang", &Tweet::lang)
      .def_readwrite("urls", &Tweet::urls)
      .def_readwrite("author_id", &Tweet::author_id)
      .def("__eq__", [](const Tweet& a, const Tweet& b) { return a == b; })
      .def("__repr__", [](const Tweet& t) {
        return "Tweet(id=" + t.id + ", text=" + t.text.substr(0, 32) + ")";
      });

  py::class_<CorpusStats>(m, "CorpusStats")
      .def_readonly("tweet_count", &CorpusStats::tweet_count)
      .def_readonly("avg_tweets_per_day", &CorpusStats::avg_tweets_per_day)
      .def_readonly("avg_words_per_tweet", &CorpusStats::avg_words_per_tweet)
      .def_readonly("pct_english", &CorpusStats::pct_english)
      .def_readonly("pct_with_url", &CorpusStats::pct_with_url)
      .def_readonly("date_range", &CorpusStats::date_range);

  m.def(
      "read_corpus",
      [](const std::filesystem::path& path, bool strict) {
        const auto result = read_corpus(
            path, strict ? Strictness::Strict : Strictness::SkipAndCount);
        return py::make_tuple(result.tweets, result.malformed, result.duplicates);
      },
      py::arg("path"), py::arg("strict") = false,
      "Read an archive; returns (tweets, malformed, duplicates).");
  m.def(
      "write_corpus",
      [](const std::filesystem::path& path, const std::vector<Tweet>& tweets) {
        write_corpus(path, tweets);
      },
      py::arg("path"), py::arg("tweets"));
  m.def(
      "compute_stats",
      [](const std::vector<Tweet>& tweets) { return compute_stats(tweets); },
      py::arg("tweets"));
  m.def(
      "keyword_filter",
      [](const std::vector<Tweet>& tweets, const std::string& keyword) {
        return keyword_filter(tweets, keyword);
      },
      py::arg("tweets"), py::arg("keyword"));

  m.def(
      "tokenize", [](const std::string& text) { return tokenize(text); },
      py::arg("text"));

  m.def(
      "tfidf_vectors",
      [](const std::vector<std::vector<std::string>>& token_lists,
         std::size_t min_df) {
        const auto docs = to_docs(token_lists);
        const auto vocab = fit_vocabulary(docs, min_df);
        const auto vectors = tfidf_vectorize_all(docs, vocab);
        std::vector<std::vector<std::pair<std::uint32_t, double>>> entries;
        entries.reserve(vectors.size());
        for (const auto& v : vectors) entries.push_back(v.entries);
        return py::make_tuple(vocab.terms(), entries);
      },
      py::arg("docs"), py::arg("min_df") = 1u,
      "Returns (terms, sparse vectors) with L2-normalized TF-IDF weights.");

  py::class_<ClusterModel>(m, "ClusterModel")
      .def_readonly("k", &ClusterModel::k)
      .def_readonly("dim", &ClusterModel::dim)
      .def_readonly("centroids", &ClusterModel::centroids)
      .def_readonly("assignments", &ClusterModel::assignments)
      .def_readonly("sse", &ClusterModel::sse)
      .def_readonly("seed", &ClusterModel::seed)
      .def_readonly("iterations", &ClusterModel::iterations)
      .def_readonly("sse_history", &ClusterModel::sse_history);

  m.def(
      "kmeans",
      [](const std::vector<std::vector<double>>& points, std::uint32_t k,
         std::uint64_t seed, std::uint32_t max_iter, double tol) {
        KmeansOptions options;
        options.max_iter = max_iter;
        options.tol = tol;
        return kmeans_fit(points, k, seed, options);
      },
      py::arg("points"), py::arg("k"), py::arg("seed") = 0,
      py::arg("max_iter") = 300, py::arg("tol") = 1e-4,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "sse_curve",
      [](const std::vector<std::vector<double>>& points,
         const std::vector<std::uint32_t>& k_values, std::uint64_t seed) {
        return sse_curve(points, k_values, seed);
      },
      py::arg("points"), py::arg("k_values"), py::arg("seed") = 0,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "elbow_select",
      [](const std::vector<std::pair<std::uint32_t, double>>& curve) {
        return elbow_select(curve);
      },
      py::arg("curve"));

  m.def(
      "extract_cves", [](const std::string& text) { return extract_cves(text); },
      py::arg("text"));
  m.def("is_canonical_cve", &is_canonical_cve, py::arg("id"));
  m.def(
      "pearson",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        return pearson(x, y);
      },
      py::arg("x"), py::arg("y"));

  py::class_<CveCountRow>(m, "CveCountRow")
      .def_readonly("cve_id", &CveCountRow::cve_id)
      .def_readonly("tweet_count", &CveCountRow::tweet_count)
      .def_readonly("cvss3", &CveCountRow::cvss3);

  m.def(
      "count_mentions",
      [](const std::vector<Tweet>& tweets, std::int64_t start, std::int64_t end,
         bool per_occurrence) {
        return count_mentions(
            tweets, start, end,
            per_occurrence ? CountMode::PerOccurrence : CountMode::PerTweet);
      },
      py::arg("tweets"), py::arg("start"), py::arg("end"),
      py::arg("per_occurrence") = false);

  py::class_<RelevanceVerdict>(m, "RelevanceVerdict")
      .def_readonly("tweet_id", &RelevanceVerdict::tweet_id)
      .def_property_readonly(
          "method",
          [](const RelevanceVerdict& v) { return std::string(to_string(v.method)); })
      .def_readonly("relevant", &RelevanceVerdict::relevant)
      .def_readonly("score", &RelevanceVerdict::score)
      .def_readonly("cluster_id", &RelevanceVerdict::cluster_id);

  m.def(
      "cluster_relevance",
      [](const std::vector<Tweet>& tweets, std::uint32_t k, std::uint64_t seed) {
        return cluster_relevance(tweets, k, seed);
      },
      py::arg("tweets"), py::arg("k") = 2, py::arg("seed") = 0,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "zero_shot",
      [](const std::vector<Tweet>& tweets, const std::string& hypothesis,
         double threshold, const std::string& scorer_url) {
        HypothesisConfig config;
        if (!hypothesis.empty()) config.hypothesis_template = hypothesis;
        config.threshold = threshold;
        std::unique_ptr<EntailmentScorer> scorer;
        if (scorer_url.empty() || scorer_url == "mock") scorer = mock_scorer();
        else scorer = std::make_unique<HttpEntailmentScorer>(scorer_url);
        const auto result = zero_shot_classify(tweets, *scorer, config);
        py::gil_scoped_acquire acquire;
        return py::make_tuple(result.verdicts, result.failed);
      },
      py::arg("tweets"), py::arg("hypothesis") = "", py::arg("threshold") = 0.5,
      py::arg("scorer_url") = "", py::call_guard<py::gil_scoped_release>(),
      "Zero-shot relevance; returns (verdicts, failed_count). Empty "
      "scorer_url uses the built-in keyword mock.");
  m.def(
      "filter_relevant",
      [](const std::vector<RelevanceVerdict>& verdicts,
         const std::vector<Tweet>& tweets) {
        const auto result = filter_relevant(verdicts, tweets);
        return py::make_tuple(result.relevant, result.retention);
      },
      py::arg("verdicts"), py::arg("tweets"),
      "Returns (relevant_tweets, retention_fraction).");

  py::class_<EmbeddingModel>(m, "EmbeddingModel")
      .def_property_readonly("terms",
                             [](const EmbeddingModel& m_) { return m_.terms; })
      .def("__len__", [](const EmbeddingModel& m_) { return m_.size(); })
      .def(
          "find",
          [](const EmbeddingModel& m_, const std::string& term) {
            return m_.find(term);
          },
          py::arg("term"))
      .def(
          "vector",
          [](const EmbeddingModel& m_, const std::string& term) {
            const auto idx = m_.find(term);
            if (!idx) throw py::key_error(term);
            return m_.input_vectors[*idx];
          },
          py::arg("term"));

  m.def(
      "train_word2vec",
      [](const std::vector<std::vector<std::string>>& token_lists, std::uint32_t dim,
         std::uint32_t window, std::uint32_t negative, std::uint32_t epochs,
         double learning_rate, double min_learning_rate, std::uint64_t min_count,
         std::uint64_t seed) {
        EmbeddingHyperparams hp;
        hp.dim = dim;
        hp.window = window;
        hp.negative_samples = negative;
        hp.epochs = epochs;
        hp.learning_rate = learning_rate;
        hp.min_learning_rate = min_learning_rate;
        hp.min_count = min_count;
        hp.seed = seed;
        return train_word2vec(to_docs(token_lists), hp);
      },
      py::arg("docs"), py::arg("dim") = 100, py::arg("window") = 5,
      py::arg("negative") = 5, py::arg("epochs") = 5,
      py::arg("learning_rate") = 0.025, py::arg("min_learning_rate") = 1e-4,
      py::arg("min_count") = 5, py::arg("seed") = 0,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "cosine_similarity",
      [](const EmbeddingModel& model, const std::string& a, const std::string& b) {
        return cosine_similarity(model, a, b);
      },
      py::arg("model"), py::arg("a"), py::arg("b"));
  m.def(
      "save_embeddings",
      [](const EmbeddingModel& model, const std::filesystem::path& path) {
        save_embeddings(model, path);
      },
      py::arg("model"), py::arg("path"));
  m.def("load_embeddings", &load_embeddings, py::arg("path"));

  py::class_<TopicCluster>(m, "TopicCluster")
      .def_readonly("id", &TopicCluster::id)
      .def_readonly("tweet_count", &TopicCluster::tweet_count)
      .def_readonly("keywords", &TopicCluster::keywords);

  py::class_<TopicMiningResult>(m, "TopicMiningResult")
      .def_readonly("clusters", &TopicMiningResult::clusters)
      .def_readonly("k", &TopicMiningResult::k)
      .def_readonly("clustered_tweets", &TopicMiningResult::clustered_tweets)
      .def_readonly("dropped_all_oov", &TopicMiningResult::dropped_all_oov)
      .def_readonly("dropped_duplicates", &TopicMiningResult::dropped_duplicates)
      .def_readonly("scan", &TopicMiningResult::scan)
      .def_readonly("clustered_ids", &TopicMiningResult::clustered_ids)
      .def_readonly("assignments", &TopicMiningResult::assignments);

  m.def(
      "mine_topics",
      [](const std::vector<Tweet>& tweets, const EmbeddingModel& model,
         std::optional<std::uint32_t> k, std::uint32_t scan_min,
         std::uint32_t scan_max, std::uint64_t seed, bool unique_texts,
         std::size_t n_keywords) {
        TopicMiningOptions options;
        options.k = k;
        options.k_scan.clear();
        for (std::uint32_t i = scan_min; i <= scan_max; ++i)
          options.k_scan.push_back(i);
        options.seed = seed;
        options.unique_texts = unique_texts;
        options.n_keywords = n_keywords;
        return mine_topics(tweets, model, options);
      },
      py::arg("tweets"), py::arg("model"), py::arg("k") = std::nullopt,
      py::arg("scan_min") = 2, py::arg("scan_max") = 15, py::arg("seed") = 0,
      py::arg("unique_texts") = false, py::arg("n_keywords") = 3,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "mine_word_topics",
      [](const EmbeddingModel& model, std::uint32_t k, std::uint64_t seed,
         std::size_t n_keywords) {
        return mine_word_topics(model, k, seed, n_keywords);
      },
      py::arg("model"), py::arg("k"), py::arg("seed") = 0, py::arg("n_keywords") = 3,
      py::call_guard<py::gil_scoped_release>());

  py::class_<LabelledTweet>(m, "LabelledTweet")
      .def_readonly("text", &LabelledTweet::text)
      .def_property_readonly(
          "raw_label",
          [](const LabelledTweet& t) { return std::string(raw_label_name(t.raw_label)); })
      .def_readonly("label", &LabelledTweet::label);

  py::class_<EvalMetrics>(m, "EvalMetrics")
      .def_readonly("tp", &EvalMetrics::tp)
      .def_readonly("fp", &EvalMetrics::fp)
      .def_readonly("fn", &EvalMetrics::fn)
      .def_readonly("tn", &EvalMetrics::tn)
      .def_readonly("accuracy", &EvalMetrics::accuracy)
      .def_readonly("precision", &EvalMetrics::precision)
      .def_readonly("recall", &EvalMetrics::recall)
      .def_readonly("f1", &EvalMetrics::f1)
      .def_readonly("subset", &EvalMetrics::subset)
      .def("total", &EvalMetrics::total);

  m.def("load_benchmark",
        [](const std::filesystem::path& path) { return load_benchmark(path); },
        py::arg("path"));
  m.def(
      "prepare_benchmark",
      [](const std::vector<LabelledTweet>& corpus, bool case_sensitive) {
        return prepare_benchmark(corpus, case_sensitive);
      },
      py::arg("corpus"), py::arg("case_sensitive") = false);
  m.def("score_predictions", &score_predictions, py::arg("predicted"),
        py::arg("labels"));
  m.def("subset_metrics", &subset_metrics, py::arg("predicted"), py::arg("labels"),
        py::arg("mask"), py::arg("subset_name"));

  m.def("config_keys", &config_keys);
  m.def(
      "report_json",
      [](const std::filesystem::path& corpus,
         const std::map<std::string, std::string>& overrides) {
        const auto config = make_config({}, env_config_overrides(), overrides);
        return render_json(build_report(config, corpus));
      },
      py::arg("corpus"), py::arg("overrides") = std::map<std::string, std::string>{},
      py::call_guard<py::gil_scoped_release>(),
      "Run the full pipeline and return the JSON report.");
  m.def(
      "report_markdown",
      [](const std::filesystem::path& corpus,
         const std::map<std::string, std::string>& overrides) {
        const auto config = make_config({}, env_config_overrides(), overrides);
        return render_markdown(build_report(config, corpus));
      },
      py::arg("corpus"), py::arg("overrides") = std::map<std::string, std::string>{},
      py::call_guard<py::gil_scoped_release>());

  m.attr("__version__") = std::string(kToolVersion);
  m.attr("STOPWORD_LIST_VERSION") = std::string(kStopwordListVersion);
  {
    py::list words;
    for (auto w : stopwords()) words.append(std::string(w));
    m.attr("STOPWORD_LIST") = std::move(words);
  }
}
