#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vulnwatch/corpus.hpp"
#include "vulnwatch/csv.hpp"
#include "vulnwatch/cve.hpp"
#include "vulnwatch/errors.hpp"
#include "vulnwatch/evaluation.hpp"
#include "vulnwatch/nvd.hpp"
#include "vulnwatch/relevance.hpp"
#include "vulnwatch/report.hpp"
#include "vulnwatch/scorer.hpp"
#include "vulnwatch/stream.hpp"
#include "vulnwatch/time.hpp"
#include "vulnwatch/tokenize.hpp"
#include "vulnwatch/topics.hpp"
#include "vulnwatch/word2vec.hpp"

using namespace vulnwatch;

namespace {

struct Common {
  std::string config_path;
  std::map<std::string, std::string> cli;
};

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--config", common.config_path, "config file of key = value lines");
  sub->add_option_function<std::string>(
      "--seed", [&common](const std::string& v) { common.cli["seed"] = v; },
      "master seed for every randomized stage");
  sub->add_option_function<std::string>(
      "--format", [&common](const std::string& v) { common.cli["format"] = v; },
      "output format: markdown, json, csv");
}

void key_option(CLI::App* sub, Common& common, const std::string& flag,
                const char* key, const char* help) {
  sub->add_option_function<std::string>(
      flag, [&common, key](const std::string& v) { common.cli[key] = v; }, help);
}

void key_flag(CLI::App* sub, Common& common, const std::string& flag, const char* key,
              const char* help) {
  sub->add_flag_callback(
      flag, [&common, key] { common.cli[key] = "true"; }, help);
}

PipelineConfig resolve_config(const Common& common) {
  std::map<std::string, std::string> file;
  if (!common.config_path.empty()) file = read_config_file(common.config_path);
  return make_config(file, env_config_overrides(), common.cli);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string opt_fixed(const std::optional<double>& v, int digits) {
  return v ? fixed(*v, digits) : std::string("NA");
}

std::unique_ptr<EntailmentScorer> make_scorer(const PipelineConfig& config) {
  if (config.scorer_url.empty() || config.scorer_url == "mock") return mock_scorer();
  return std::make_unique<HttpEntailmentScorer>(config.scorer_url);
}

void write_text(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write " + out);
  f << text;
}

int cmd_ingest(const Common& common, const std::string& in, const std::string& url,
               const std::string& out) {
  const auto config = resolve_config(common);
  if (!url.empty()) {
    HttpStreamSource source(url);
    const auto appended = stream_collect(source, config.keyword, out);
    std::cout << "collected " << appended << " records into " << out << "\n";
  } else if (!in.empty()) {
    const auto read = read_corpus(in, config.strictness);
    write_corpus(out, read.tweets);
    std::cout << "wrote " << read.tweets.size() << " records (" << read.malformed
              << " malformed skipped, " << read.duplicates
              << " duplicates dropped)\n";
  } else {
    throw ConfigError("ingest: need --in <archive> or --url <stream endpoint>");
  }
  return 0;
}

int cmd_stats(const Common& common, const std::string& in) {
  const auto config = resolve_config(common);
  const auto read = read_corpus(in, config.strictness);
  const auto stats = compute_stats(read.tweets);
  const auto start = stats.date_range
                         ? format_rfc3339_utc(stats.date_range->first)
                         : std::string("NA");
  const auto end = stats.date_range ? format_rfc3339_utc(stats.date_range->second)
                                    : std::string("NA");
  switch (config.format) {
    case ReportFormat::Markdown: {
      std::cout << "| Metric | Value |\n|---|---|\n";
      std::cout << "| Tweets | " << stats.tweet_count << " |\n";
      std::cout << "| Avg tweets/day | " << fixed(stats.avg_tweets_per_day, 2)
                << " |\n";
      std::cout << "| Avg words/tweet | " << fixed(stats.avg_words_per_tweet, 2)
                << " |\n";
      std::cout << "| English | " << fixed(stats.pct_english, 2) << "% |\n";
      std::cout << "| With URL | " << fixed(stats.pct_with_url, 2) << "% |\n";
      std::cout << "| First tweet | " << start << " |\n";
      std::cout << "| Last tweet | " << end << " |\n";
      std::cout << "| Malformed skipped | " << read.malformed << " |\n";
      std::cout << "| Duplicates dropped | " << read.duplicates << " |\n";
      break;
    }
    case ReportFormat::Json: {
      nlohmann::json j;
      j["tweet_count"] = stats.tweet_count;
      j["avg_tweets_per_day"] = stats.avg_tweets_per_day;
      j["avg_words_per_tweet"] = stats.avg_words_per_tweet;
      j["pct_english"] = stats.pct_english;
      j["pct_with_url"] = stats.pct_with_url;
      if (stats.date_range) {
        j["date_range"]["start"] = start;
        j["date_range"]["end"] = end;
      } else {
        j["date_range"] = nullptr;
      }
      j["malformed"] = read.malformed;
      j["duplicates"] = read.duplicates;
      std::cout << j.dump(2) << "\n";
      break;
    }
    case ReportFormat::Csv: {
      std::cout << "metric,value\n";
      std::cout << "tweet_count," << stats.tweet_count << "\n";
      std::cout << "avg_tweets_per_day," << nlohmann::json(stats.avg_tweets_per_day).dump()
                << "\n";
      std::cout << "avg_words_per_tweet,"
                << nlohmann::json(stats.avg_words_per_tweet).dump() << "\n";
      std::cout << "pct_english," << nlohmann::json(stats.pct_english).dump() << "\n";
      std::cout << "pct_with_url," << nlohmann::json(stats.pct_with_url).dump() << "\n";
      std::cout << "range_start," << start << "\n";
      std::cout << "range_end," << end << "\n";
      std::cout << "malformed," << read.malformed << "\n";
      std::cout << "duplicates," << read.duplicates << "\n";
      break;
    }
  }
  return 0;
}

int cmd_filter(const Common& common, const std::string& in, const std::string& out) {
  const auto config = resolve_config(common);
  if (config.keyword.empty()) throw ConfigError("filter: keyword must be non-empty");
  const auto read = read_corpus(in, config.strictness);
  const auto filtered = keyword_filter(read.tweets, config.keyword);
  write_corpus(out, filtered);
  std::cout << "retained " << filtered.size() << " of " << read.tweets.size()
            << " tweets\n";
  return 0;
}

int cmd_cves(const Common& common, const std::string& in) {
  const auto config = resolve_config(common);
  const auto read = read_corpus(in, config.strictness);
  const auto stats = compute_stats(read.tweets);

  std::optional<std::int64_t> start, end;
  if (!config.window_start.empty()) start = parse_rfc3339(config.window_start);
  else if (stats.date_range) start = stats.date_range->first;
  if (!config.window_end.empty()) end = parse_rfc3339(config.window_end);
  else if (stats.date_range) end = stats.date_range->second;

  std::vector<CveCountRow> rows;
  if (start && end) {
    rows = count_mentions(read.tweets, *start, *end, config.count_mode);
    if (rows.size() > config.top_cves) rows.resize(config.top_cves);
  }

  const bool has_remote = !config.nvd_url.empty();
  const bool has_cache = !config.cvss_cache.empty();
  if (!rows.empty() && (has_remote || has_cache)) {
    std::shared_ptr<NvdClient> remote;
    if (has_remote) remote = std::make_shared<HttpNvdClient>(config.nvd_url);
    std::shared_ptr<CvssCache> cache;
    if (has_cache) cache = std::make_shared<CvssCache>(config.cvss_cache);
    CvssSource source(remote, cache, config.cvss_ttl_seconds);
    for (auto& row : rows) {
      try {
        row.cvss3 = source.fetch(row.cve_id).cvss3;
      } catch (const ExternalServiceError& e) {
        std::fprintf(stderr, "warning: cvss %s: %s\n", row.cve_id.c_str(), e.what());
      }
    }
  }
  std::optional<CorrelationResult> correlation;
  try {
    correlation = cvss_correlation(rows);
  } catch (const std::invalid_argument&) {
  }

  switch (config.format) {
    case ReportFormat::Markdown: {
      if (rows.empty()) {
        std::cout << "(no CVE mentions)\n";
        break;
      }
      std::cout << "| CVE | Tweets | CVSS3 |\n|---|---|---|\n";
      for (const auto& row : rows)
        std::cout << "| " << row.cve_id << " | " << row.tweet_count << " | "
                  << opt_fixed(row.cvss3, 1) << " |\n";
      if (correlation)
        std::cout << "\nCorrelation (tweet count vs CVSS3): r = "
                  << fixed(correlation->r, 2) << " over " << correlation->used_rows
                  << " rows (" << correlation->excluded_rows << " excluded)\n";
      break;
    }
    case ReportFormat::Json: {
      nlohmann::json j;
      auto arr = nlohmann::json::array();
      for (const auto& row : rows) {
        nlohmann::json c;
        c["cve_id"] = row.cve_id;
        c["tweet_count"] = row.tweet_count;
        c["cvss3"] = row.cvss3 ? nlohmann::json(*row.cvss3) : nlohmann::json(nullptr);
        arr.push_back(c);
      }
      j["top_cves"] = arr;
      if (correlation) {
        j["correlation"]["r"] = correlation->r;
        j["correlation"]["used_rows"] = correlation->used_rows;
        j["correlation"]["excluded_rows"] = correlation->excluded_rows;
      } else {
        j["correlation"] = nullptr;
      }
      std::cout << j.dump(2) << "\n";
      break;
    }
    case ReportFormat::Csv: {
      std::cout << "cve_id,tweet_count,cvss3\n";
      for (const auto& row : rows)
        std::cout << row.cve_id << ',' << row.tweet_count << ','
                  << (row.cvss3 ? fixed(*row.cvss3, 1) : std::string("NA")) << "\n";
      break;
    }
  }
  return 0;
}

void print_topics(const std::vector<TopicCluster>& clusters, ReportFormat format) {
  switch (format) {
    case ReportFormat::Markdown: {
      std::cout << "| Cluster | Members | Keywords |\n|---|---|---|\n";
      for (const auto& cluster : clusters) {
        std::string keywords;
        for (const auto& k : cluster.keywords) {
          if (!keywords.empty()) keywords += ", ";
          keywords += k;
        }
        std::cout << "| " << cluster.id << " | " << cluster.tweet_count << " | "
                  << keywords << " |\n";
      }
      break;
    }
    case ReportFormat::Json: {
      auto arr = nlohmann::json::array();
      for (const auto& cluster : clusters) {
        nlohmann::json t;
        t["id"] = cluster.id;
        t["tweet_count"] = cluster.tweet_count;
        t["keywords"] = cluster.keywords;
        arr.push_back(t);
      }
      std::cout << arr.dump(2) << "\n";
      break;
    }
    case ReportFormat::Csv: {
      std::cout << "cluster_id,tweet_count,keywords\n";
      for (const auto& cluster : clusters) {
        std::string keywords;
        for (const auto& k : cluster.keywords) {
          if (!keywords.empty()) keywords += ' ';
          keywords += k;
        }
        std::cout << cluster.id << ',' << cluster.tweet_count << ','
                  << csv_escape(keywords) << "\n";
      }
      break;
    }
  }
}

int cmd_topics(const Common& common, const std::string& in,
               const std::string& model_path, const std::string& save_model,
               bool cluster_words) {
  const auto config = resolve_config(common);
  const auto read = read_corpus(in, config.strictness);

  EmbeddingModel model;
  if (!model_path.empty()) {
    model = load_embeddings(model_path);
  } else {
    EmbeddingHyperparams hp;
    hp.dim = config.embed_dim;
    hp.window = config.embed_window;
    hp.negative_samples = config.embed_negative;
    hp.epochs = config.embed_epochs;
    hp.min_count = config.embed_min_count;
    hp.seed = config.seed;
    model = train_word2vec(tokenize_tweets(read.tweets), hp);
  }
  if (!save_model.empty()) save_embeddings(model, save_model);

  if (cluster_words) {
    if (!config.topic_k)
      throw ConfigError("topics: --cluster-words needs a concrete topic_k");
    print_topics(mine_word_topics(model, *config.topic_k, config.seed),
                 config.format);
    return 0;
  }

  TopicMiningOptions options;
  options.k = config.topic_k;
  options.k_scan.clear();
  for (std::uint32_t k = config.topic_scan_min; k <= config.topic_scan_max; ++k)
    options.k_scan.push_back(k);
  options.seed = config.seed;
  options.unique_texts = config.topics_unique;
  const auto result = mine_topics(read.tweets, model, options);
  if (!config.topic_k)
    std::fprintf(stderr, "selected k = %u by the elbow method\n", result.k);
  print_topics(result.clusters, config.format);
  return 0;
}

int cmd_evaluate(const Common& common, const std::string& benchmark_path,
                 bool case_sensitive, std::uint32_t batch) {
  const auto config = resolve_config(common);
  const auto raw = load_benchmark(benchmark_path);
  const auto bench = prepare_benchmark(raw, case_sensitive);
  if (bench.empty()) throw DataError("evaluate: prepared benchmark is empty");

  std::vector<bool> labels(bench.size());
  std::vector<bool> has_cve(bench.size());
  for (std::size_t i = 0; i < bench.size(); ++i) {
    labels[i] = bench[i].label;
    has_cve[i] = !extract_cves(bench[i].text).empty();
  }

  std::vector<bool> predicted(bench.size(), false);
  if (config.method == RelevanceMethod::Kmeans) {
    std::vector<Tweet> tweets(bench.size());
    for (std::size_t i = 0; i < bench.size(); ++i) {
      tweets[i].id = std::to_string(i);
      tweets[i].text = bench[i].text;
      tweets[i].lang = "und";
    }
    const auto verdicts = cluster_relevance(tweets, config.relevance_k, config.seed);
    for (std::size_t i = 0; i < bench.size(); ++i) predicted[i] = verdicts[i].relevant;
  } else {
    const auto scorer = make_scorer(config);
    if (batch > 1) {
      for (std::size_t base = 0; base < bench.size(); base += batch) {
        const std::size_t limit = std::min(bench.size(), base + batch);
        std::vector<std::string> premises;
        premises.reserve(limit - base);
        for (std::size_t i = base; i < limit; ++i) premises.push_back(bench[i].text);
        const auto scores = scorer->score_batch(premises, config.hypothesis);
        for (std::size_t i = base; i < limit; ++i)
          predicted[i] = scores[i - base] >= config.threshold;
      }
    } else {
      std::vector<Tweet> tweets(bench.size());
      for (std::size_t i = 0; i < bench.size(); ++i) {
        tweets[i].id = std::to_string(i);
        tweets[i].text = bench[i].text;
        tweets[i].lang = "und";
      }
      HypothesisConfig hypothesis;
      hypothesis.hypothesis_template = config.hypothesis;
      hypothesis.threshold = config.threshold;
      const auto result = zero_shot_classify(tweets, *scorer, hypothesis);
      for (std::size_t i = 0; i < bench.size(); ++i)
        predicted[i] = result.verdicts[i].relevant;
      if (result.failed > 0)
        std::cerr << "warning: " << result.failed << " of " << bench.size()
                  << " records were never scored (treated as not relevant); "
                     "the metrics below understate the scorer\n";
    }
  }

  std::vector<EvalMetrics> rows;
  rows.push_back(score_predictions(predicted, labels));
  std::vector<bool> no_cve(bench.size());
  bool any_cve = false, any_plain = false;
  for (std::size_t i = 0; i < bench.size(); ++i) {
    no_cve[i] = !has_cve[i];
    any_cve = any_cve || has_cve[i];
    any_plain = any_plain || no_cve[i];
  }
  if (any_cve) rows.push_back(subset_metrics(predicted, labels, has_cve, "has-CVE"));
  if (any_plain) rows.push_back(subset_metrics(predicted, labels, no_cve, "no-CVE"));

  switch (config.format) {
    case ReportFormat::Markdown: {
      std::cout
          << "| Subset | N | TP | FP | FN | TN | Acc | Prec | Rec | F1 |\n"
          << "|---|---|---|---|---|---|---|---|---|---|\n";
      for (const auto& m : rows)
        std::cout << "| " << m.subset << " | " << m.total() << " | " << m.tp << " | "
                  << m.fp << " | " << m.fn << " | " << m.tn << " | "
                  << opt_fixed(m.accuracy, 2) << " | " << opt_fixed(m.precision, 2)
                  << " | " << opt_fixed(m.recall, 2) << " | " << opt_fixed(m.f1, 2)
                  << " |\n";
      break;
    }
    case ReportFormat::Json: {
      auto arr = nlohmann::json::array();
      for (const auto& m : rows) {
        nlohmann::json j;
        j["subset"] = m.subset;
        j["n"] = m.total();
        j["tp"] = m.tp;
        j["fp"] = m.fp;
        j["fn"] = m.fn;
        j["tn"] = m.tn;
        j["accuracy"] = m.accuracy ? nlohmann::json(*m.accuracy) : nlohmann::json(nullptr);
        j["precision"] =
            m.precision ? nlohmann::json(*m.precision) : nlohmann::json(nullptr);
        j["recall"] = m.recall ? nlohmann::json(*m.recall) : nlohmann::json(nullptr);
        j["f1"] = m.f1 ? nlohmann::json(*m.f1) : nlohmann::json(nullptr);
        arr.push_back(j);
      }
      std::cout << arr.dump(2) << "\n";
      break;
    }
    case ReportFormat::Csv: {
      std::cout << "subset,n,tp,fp,fn,tn,accuracy,precision,recall,f1\n";
      for (const auto& m : rows)
        std::cout << csv_escape(m.subset) << ',' << m.total() << ',' << m.tp << ','
                  << m.fp << ',' << m.fn << ',' << m.tn << ','
                  << opt_fixed(m.accuracy, 2) << ',' << opt_fixed(m.precision, 2)
                  << ',' << opt_fixed(m.recall, 2) << ',' << opt_fixed(m.f1, 2)
                  << "\n";
      break;
    }
  }
  return 0;
}

int cmd_report(const Common& common, const std::string& in, const std::string& out) {
  const auto config = resolve_config(common);
  const auto report = build_report(config, in);
  switch (config.format) {
    case ReportFormat::Markdown:
      write_text(render_markdown(report), out);
      break;
    case ReportFormat::Json:
      write_text(render_json(report), out);
      break;
    case ReportFormat::Csv:
      if (out.empty()) throw ConfigError("report: csv format needs --out <directory>");
      render_csv(report, out);
      break;
  }
  for (const auto& w : report.warnings)
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vulnwatch: unsupervised cyber-relevance mining over tweet archives"};
  app.require_subcommand(1);

  Common ingest_common;
  std::string ingest_in, ingest_url, ingest_out;
  auto* ingest = app.add_subcommand("ingest", "collect or normalize an archive");
  add_common(ingest, ingest_common);
  ingest->add_option("--in", ingest_in, "existing archive to normalize");
  ingest->add_option("--url", ingest_url, "HTTP stream endpoint to collect from");
  ingest->add_option("--out", ingest_out, "destination archive")->required();
  key_option(ingest, ingest_common, "--keyword", "keyword", "stream keyword filter");
  key_option(ingest, ingest_common, "--strictness", "strictness", "strict or skip");

  Common stats_common;
  std::string stats_in;
  auto* stats = app.add_subcommand("stats", "summarize an archive");
  add_common(stats, stats_common);
  stats->add_option("--in", stats_in, "archive to summarize")->required();
  key_option(stats, stats_common, "--strictness", "strictness", "strict or skip");

  Common filter_common;
  std::string filter_in, filter_out;
  auto* filter = app.add_subcommand("filter", "keep tweets matching the keyword");
  add_common(filter, filter_common);
  filter->add_option("--in", filter_in, "source archive")->required();
  filter->add_option("--out", filter_out, "destination archive")->required();
  key_option(filter, filter_common, "--keyword", "keyword", "substring to match");
  key_option(filter, filter_common, "--strictness", "strictness", "strict or skip");

  Common cves_common;
  std::string cves_in;
  auto* cves = app.add_subcommand("cves", "rank CVE mentions with CVSS scores");
  add_common(cves, cves_common);
  cves->add_option("--in", cves_in, "archive to scan")->required();
  key_option(cves, cves_common, "--top", "top_cves", "rows to keep");
  key_option(cves, cves_common, "--mode", "count_mode", "per-tweet or per-occurrence");
  key_option(cves, cves_common, "--window-start", "window_start", "RFC 3339 start");
  key_option(cves, cves_common, "--window-end", "window_end", "RFC 3339 end");
  key_option(cves, cves_common, "--nvd-url", "nvd_url", "NVD endpoint; empty disables");
  key_option(cves, cves_common, "--cvss-cache", "cvss_cache", "score cache file");
  key_option(cves, cves_common, "--ttl", "cvss_ttl_seconds", "cache TTL seconds");
  key_option(cves, cves_common, "--strictness", "strictness", "strict or skip");

  Common topics_common;
  std::string topics_in, topics_model, topics_save;
  bool topics_words = false;
  auto* topics = app.add_subcommand("topics", "train embeddings and cluster topics");
  add_common(topics, topics_common);
  topics->add_option("--in", topics_in, "archive to mine")->required();
  topics->add_option("--model", topics_model, "load embeddings instead of training");
  topics->add_option("--save-model", topics_save, "write trained embeddings here");
  topics->add_flag("--cluster-words", topics_words,
                   "cluster vocabulary vectors instead of tweets");
  key_option(topics, topics_common, "--k", "topic_k", "cluster count or auto");
  key_option(topics, topics_common, "--scan-min", "topic_scan_min", "elbow scan start");
  key_option(topics, topics_common, "--scan-max", "topic_scan_max", "elbow scan end");
  key_flag(topics, topics_common, "--unique", "topics_unique",
           "drop duplicate texts first");
  key_option(topics, topics_common, "--dim", "embed_dim", "embedding dimension");
  key_option(topics, topics_common, "--window", "embed_window", "context window");
  key_option(topics, topics_common, "--negative", "embed_negative", "negative samples");
  key_option(topics, topics_common, "--epochs", "embed_epochs", "training epochs");
  key_option(topics, topics_common, "--min-count", "embed_min_count",
             "vocabulary frequency floor");
  key_option(topics, topics_common, "--strictness", "strictness", "strict or skip");

  Common evaluate_common;
  std::string evaluate_benchmark;
  bool evaluate_case_sensitive = false;
  std::uint32_t evaluate_batch = 1;
  auto* evaluate =
      app.add_subcommand("evaluate", "score a method against the labelled benchmark");
  add_common(evaluate, evaluate_common);
  evaluate->add_option("--benchmark", evaluate_benchmark, "labelled CSV corpus")
      ->required();
  evaluate->add_flag("--case-sensitive", evaluate_case_sensitive,
                     "match the keyword case-sensitively during prep");
  evaluate->add_option("--batch", evaluate_batch,
                       "score via /score_batch in chunks of this size");
  key_option(evaluate, evaluate_common, "--method", "method", "kmeans or zeroshot");
  key_option(evaluate, evaluate_common, "--scorer-url", "scorer_url",
             "entailment scorer endpoint (empty: built-in mock)");
  key_option(evaluate, evaluate_common, "--threshold", "threshold",
             "relevance probability threshold");
  key_option(evaluate, evaluate_common, "--k", "relevance_k", "k for kmeans method");
  key_option(evaluate, evaluate_common, "--hypothesis", "hypothesis",
             "zero-shot hypothesis text");

  Common report_common;
  std::string report_in, report_out;
  auto* report = app.add_subcommand("report", "run the full pipeline and render");
  add_common(report, report_common);
  report->add_option("--in", report_in, "archive to analyze")->required();
  report->add_option("--out", report_out,
                     "output file (markdown/json) or directory (csv); default stdout");
  key_option(report, report_common, "--keyword", "keyword", "corpus keyword filter");
  key_option(report, report_common, "--method", "method", "kmeans or zeroshot");
  key_option(report, report_common, "--scorer-url", "scorer_url",
             "entailment scorer endpoint (empty: built-in mock)");
  key_option(report, report_common, "--k", "topic_k", "topic cluster count or auto");

  try {
    app.parse(argc, argv);
    if (app.got_subcommand(ingest))
      return cmd_ingest(ingest_common, ingest_in, ingest_url, ingest_out);
    if (app.got_subcommand(stats)) return cmd_stats(stats_common, stats_in);
    if (app.got_subcommand(filter))
      return cmd_filter(filter_common, filter_in, filter_out);
    if (app.got_subcommand(cves)) return cmd_cves(cves_common, cves_in);
    if (app.got_subcommand(topics))
      return cmd_topics(topics_common, topics_in, topics_model, topics_save,
                        topics_words);
    if (app.got_subcommand(evaluate))
      return cmd_evaluate(evaluate_common, evaluate_benchmark,
                          evaluate_case_sensitive, evaluate_batch);
    if (app.got_subcommand(report))
      return cmd_report(report_common, report_in, report_out);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  } catch (const ExternalServiceError& e) {
    std::fprintf(stderr, "service error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
