#include "vulnwatch/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <type_traits>

#include "json.hpp"
#include "vulnwatch/csv.hpp"
#include "vulnwatch/errors.hpp"
#include "vulnwatch/nvd.hpp"
#include "vulnwatch/scorer.hpp"
#include "vulnwatch/stopwords.hpp"
#include "vulnwatch/time.hpp"
#include "vulnwatch/tokenize.hpp"
#include "vulnwatch/word2vec.hpp"

namespace vulnwatch {

ReportFormat report_format_from_string(std::string_view name) {
  if (name == "markdown") return ReportFormat::Markdown;
  if (name == "json" || name == "machine-readable") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw ConfigError("unknown format: " + std::string(name) +
                    " (want markdown, json, or csv)");
}

std::string to_string(ReportFormat format) {
  switch (format) {
    case ReportFormat::Markdown: return "markdown";
    case ReportFormat::Json: return "json";
    case ReportFormat::Csv: return "csv";
  }
  return "markdown";
}

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* want) {
  throw ConfigError("config key " + key + ": cannot parse \"" + value + "\" as " +
                    want);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end || value.empty())
    bad_value(key, value, "a non-negative integer");
  return out;
}

std::uint32_t parse_u32(const std::string& key, const std::string& value) {
  const auto v = parse_u64(key, value);
  if (v > 0xffffffffull) bad_value(key, value, "a 32-bit integer");
  return static_cast<std::uint32_t>(v);
}

std::int64_t parse_i64(const std::string& key, const std::string& value) {
  std::int64_t out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end || value.empty())
    bad_value(key, value, "an integer");
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  double out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end || value.empty())
    bad_value(key, value, "a number");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, value, "a boolean (true/false)");
}

std::string num(double v) { return nlohmann::json(v).dump(); }

struct KeySpec {
  const char* key;
  void (*set)(PipelineConfig&, const std::string&);
  std::string (*get)(const PipelineConfig&);
};

const KeySpec kKeySpecs[] = {
    {"keyword", [](PipelineConfig& c, const std::string& v) { c.keyword = v; },
     [](const PipelineConfig& c) { return c.keyword; }},
    {"method",
     [](PipelineConfig& c, const std::string& v) {
       if (v == "kmeans") c.method = RelevanceMethod::Kmeans;
       else if (v == "zeroshot") c.method = RelevanceMethod::Zeroshot;
       else bad_value("method", v, "kmeans or zeroshot");
     },
     [](const PipelineConfig& c) { return to_string(c.method); }},
    {"hypothesis", [](PipelineConfig& c, const std::string& v) { c.hypothesis = v; },
     [](const PipelineConfig& c) { return c.hypothesis; }},
    {"threshold",
     [](PipelineConfig& c, const std::string& v) {
       c.threshold = parse_double("threshold", v);
     },
     [](const PipelineConfig& c) { return num(c.threshold); }},
    {"relevance_k",
     [](PipelineConfig& c, const std::string& v) {
       c.relevance_k = parse_u32("relevance_k", v);
     },
     [](const PipelineConfig& c) { return std::to_string(c.relevance_k); }},
    {"topic_k",
     [](PipelineConfig& c, const std::string& v) {
       if (v == "auto") c.topic_k.reset();
       else c.topic_k = parse_u32("topic_k", v);
     },
     [](const PipelineConfig& c) {
       return c.topic_k ? std::to_string(*c.topic_k) : std::string("auto");
     }},
    {"topic_scan_min",
     [](PipelineConfig& c, const std::string& v) {
       c.topic_scan_min = parse_u32("topic_scan_min", v);
     },
     [](const PipelineConfig& c) { return std::to_string(c.topic_scan_min); }},
    {"topic_scan_max",
     [](PipelineConfig& c, const std::string& v) {
       c.topic_scan_max = parse_u32("topic_scan_max", v);
     },
     [](const PipelineConfig& c) { return std::to_string(c.topic_scan_max); }},
    {"topics_unique",
     [](PipelineConfig& c, const std::string& v) {
       c.topics_unique = parse_bool("topics_unique", v);
     },
     [](const PipelineConfig& c) {
       return std::string(c.topics_unique ? "true" : "false");
     }},
    {"seed",
     [](PipelineConfig& c, const std::string& v) { c.seed = parse_u64("seed", v); },
     [](const PipelineConfig& c) { return std::to_string(c.seed); }},
    {"scorer_url", [](PipelineConfig& c, const std::string& v) { c.scorer_url = v; },
     [](const PipelineConfig& c) { return c.scorer_url; }},
    {"verdicts_file",
     [](PipelineConfig& c, const std::string& v) { c.verdicts_file = v; },
     [](const PipelineConfig& c) { return c.verdicts_file; }},
    {"nvd_url", [](PipelineConfig& c, const std::string& v) { c.nvd_url = v; },
     [](const PipelineConfig& c) { return c.nvd_url; }},
    {"cvss_cache", [](PipelineConfig& c, const std::string& v) { c.cvss_cache = v; },
     [](const PipelineConfig& c) { return c.cvss_cache; }},
    {"cvss_ttl_seconds",
     [](PipelineConfig& c, const std::string& v) {
       c.cvss_ttl_seconds = parse_i64("cvss_ttl_seconds", v);
     },
     [](const PipelineConfig& c) { return std::to_string(c.cvss_ttl_seconds); }},
    {"strictness",
     [](PipelineConfig& c, const std::string& v) {
       if (v == "strict") c.strictness = Strictness::Strict;
       else if (v == "skip") c.strictness = Strictness::SkipAndCount;
       else bad_value("strictness", v, "strict or skip");
     },
     [](const PipelineConfig& c) {
       return std::string(c.strictness == Strictness::Strict ? "strict" : "skip");
     }},
    {"format",
     [](PipelineConfig& c, const std::string& v) {
       c.format = report_format_from_string(v);
     },
     [](const PipelineConfig& c) { return to_string(c.format); }},
    {"top_cves",
     [](PipelineConfig& c, const std::string& v) {
       c.top_cves = parse_u32("top_cves", v);
     },
     [](const PipelineConfig& c) { return std::to_string(c.top_cves); }},
    {"count_mode",
     [](PipelineConfig& c, const std::string& v) {
       if (v == "per-tweet") c.count_mode = CountMode::PerTweet;
       else if (v == "per-occurrence") c.count_mode = CountMode::PerOccurrence;
       else bad_value("count_mode", v, "per-tweet or per-occurrence");
     },
     [](const PipelineConfig& c) {
       return std::string(c.count_mode == CountMode::PerTweet ? "per-tweet"
                                                              : "per-occurrence");
     }},
    {"phrases_n",
     [](PipelineConfig& c, const std::string& v) {
       c.phrases_n = parse_u32("phrases_n", v);
     },
     [](const PipelineConfig& c) { return std::to_string(c.phrases_n); }},
    {"ngram_lo",
     [](PipelineConfig& c, const std::string& v) {
       c.ngram_lo = parse_u32("ngram_lo", v);
     },
     [](const PipelineConfig& c) { return std::to_string(c.ngram_lo); }},
    {"ngram_hi",
     [](PipelineConfig& c, const std::string& v) {
       c.ngram_hi = parse_u32("ngram_hi", v);
     },
     [](const PipelineConfig& c) { return std::to_string(c.ngram_hi); }},
    {"window_start",
     [](PipelineConfig& c, const std::string& v) { c.window_start = v; },
     [](const PipelineConfig& c) { return c.window_start; }},
    {"window_end", [](PipelineConfig& c, const std::string& v) { c.window_end = v; },
     [](const PipelineConfig& c) { return c.window_end; }},
    {"embed_dim",
     [](PipelineConfig& c, const std::string& v) {
       c.embed_dim = parse_u32("embed_dim", v);
     },
     [](const PipelineConfig& c) { return std::to_string(c.embed_dim); }},
    {"embed_window",
     [](PipelineConfig& c, const std::string& v) {
       c.embed_window = parse_u32("embed_window", v);
     },
     [](const PipelineConfig& c) { return std::to_string(c.embed_window); }},
    {"embed_negative",
     [](PipelineConfig& c, const std::string& v) {
       c.embed_negative = parse_u32("embed_negative", v);
     },
     [](const PipelineConfig& c) { return std::to_string(c.embed_negative); }},
    {"embed_epochs",
     [](PipelineConfig& c, const std::string& v) {
       c.embed_epochs = parse_u32("embed_epochs", v);
     },
     [](const PipelineConfig& c) { return std::to_string(c.embed_epochs); }},
    {"embed_min_count",
     [](PipelineConfig& c, const std::string& v) {
       c.embed_min_count = parse_u32("embed_min_count", v);
     },
     [](const PipelineConfig& c) { return std::to_string(c.embed_min_count); }},
};

const KeySpec* find_key(const std::string& key) {
  for (const auto& spec : kKeySpecs)
    if (key == spec.key) return &spec;
  return nullptr;
}

void validate_config(const PipelineConfig& c) {
  if (!(c.threshold > 0.0 && c.threshold < 1.0))
    throw ConfigError("threshold must lie strictly between 0 and 1");
  if (c.hypothesis.empty()) throw ConfigError("hypothesis must be non-empty");
  if (c.relevance_k == 0) throw ConfigError("relevance_k must be >= 1");
  if (c.topic_k && *c.topic_k == 0) throw ConfigError("topic_k must be >= 1 or auto");
  if (c.topic_scan_min == 0 || c.topic_scan_min > c.topic_scan_max)
    throw ConfigError("need 1 <= topic_scan_min <= topic_scan_max");
  if (c.ngram_lo < 1 || c.ngram_lo > c.ngram_hi || c.ngram_hi > 3)
    throw ConfigError("need 1 <= ngram_lo <= ngram_hi <= 3");
  if (c.embed_dim < 2) throw ConfigError("embed_dim must be >= 2");
  if (c.embed_window == 0) throw ConfigError("embed_window must be >= 1");
  if (c.embed_negative == 0) throw ConfigError("embed_negative must be >= 1");
  if (c.embed_epochs == 0) throw ConfigError("embed_epochs must be >= 1");
  if (c.embed_min_count == 0) throw ConfigError("embed_min_count must be >= 1");
  if (c.cvss_ttl_seconds < 0) throw ConfigError("cvss_ttl_seconds must be >= 0");
  std::optional<std::int64_t> start, end;
  if (!c.window_start.empty()) {
    start = parse_rfc3339(c.window_start);
    if (!start) throw ConfigError("window_start is not RFC 3339: " + c.window_start);
  }
  if (!c.window_end.empty()) {
    end = parse_rfc3339(c.window_end);
    if (!end) throw ConfigError("window_end is not RFC 3339: " + c.window_end);
  }
  if (start && end && *start > *end)
    throw ConfigError("window_start is after window_end");
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return "";
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) -> std::invoke_result_t<Fn> {
  try {
    return std::forward<Fn>(fn)();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(stage) + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(std::string(stage) + ": " + e.what());
  } catch (const ExternalServiceError& e) {
    throw ExternalServiceError(std::string(stage) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string(stage) + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(std::string(stage) + ": " + e.what());
  }
}

}  // namespace

std::map<std::string, std::string> PipelineConfig::snapshot() const {
  std::map<std::string, std::string> out;
  for (const auto& spec : kKeySpecs) out.emplace(spec.key, spec.get(*this));
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& spec : kKeySpecs) out.emplace_back(spec.key);
  return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const auto stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    const auto key = trim(stripped.substr(0, eq));
    const auto value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (!out.emplace(key, value).second)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": duplicate key " + key);
  }
  return out;
}

std::map<std::string, std::string> env_config_overrides() {
  std::map<std::string, std::string> out;
  for (const auto& spec : kKeySpecs) {
    std::string name = "VULNWATCH_";
    for (const char* p = spec.key; *p; ++p)
      name += static_cast<char>(std::toupper(static_cast<unsigned char>(*p)));
    if (const char* value = std::getenv(name.c_str())) out.emplace(spec.key, value);
  }
  return out;
}

PipelineConfig make_config(const std::map<std::string, std::string>& file_values,
                           const std::map<std::string, std::string>& env_values,
                           const std::map<std::string, std::string>& cli_values) {
  PipelineConfig config;
  for (const auto* source : {&file_values, &env_values, &cli_values})
    for (const auto& [key, value] : *source) {
      const auto* spec = find_key(key);
      if (!spec) throw ConfigError("unknown config key: " + key);
      spec->set(config, value);
    }
  validate_config(config);
  return config;
}

std::vector<std::pair<std::string, std::uint64_t>> top_phrases(
    std::span<const Tweet> tweets, std::size_t n,
    std::pair<std::uint32_t, std::uint32_t> ngram_range) {
  const auto [lo, hi] = ngram_range;
  if (lo < 1 || lo > hi || hi > 3)
    throw std::invalid_argument("top_phrases: need 1 <= lo <= hi <= 3");

  std::map<std::string, std::uint64_t> counts;
  for (const auto& tweet : tweets) {
    const auto tokens = tokenize(tweet.text);
    for (std::uint32_t len = lo; len <= hi; ++len) {
      if (tokens.size() < len) continue;
      for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
        bool all_stop = true;
        for (std::size_t j = i; j < i + len && all_stop; ++j)
          all_stop = is_stopword(tokens[j]);
        if (all_stop) continue;
        std::string phrase = tokens[i];
        for (std::size_t j = i + 1; j < i + len; ++j) {
          phrase += ' ';
          phrase += tokens[j];
        }
        ++counts[phrase];
      }
    }
  }
  std::vector<std::pair<std::string, std::uint64_t>> rows(counts.begin(), counts.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (rows.size() > n) rows.resize(n);
  return rows;
}

Report build_report(const PipelineConfig& config, const std::filesystem::path& corpus) {
  run_stage("config", [&] { validate_config(config); return 0; });

  Report report;
  report.method = config.method;
  report.provenance = config.snapshot();
  report.provenance["tool_version"] = std::string(kToolVersion);
  report.provenance["stopword_list"] = std::string(kStopwordListVersion);

  const auto read = run_stage(
      "ingest", [&] { return read_corpus(corpus, config.strictness); });
  report.provenance["ingest_malformed"] = std::to_string(read.malformed);
  report.provenance["ingest_duplicates"] = std::to_string(read.duplicates);
  const auto& all = read.tweets;
  report.corpus_stats = compute_stats(all);

  std::optional<std::int64_t> start, end;
  if (!config.window_start.empty()) start = parse_rfc3339(config.window_start);
  else if (report.corpus_stats.date_range)
    start = report.corpus_stats.date_range->first;
  if (!config.window_end.empty()) end = parse_rfc3339(config.window_end);
  else if (report.corpus_stats.date_range)
    end = report.corpus_stats.date_range->second;
  if (start && end) {
    if (*start > *end) throw ConfigError("config: window_start is after window_end");
    report.period = std::make_pair(*start, *end);
  }

  if (all.empty()) {
    report.warnings.push_back("corpus is empty; nothing to analyze");
    return report;
  }

  const auto filtered =
      config.keyword.empty()
          ? std::vector<Tweet>(all.begin(), all.end())
          : run_stage("filter", [&] { return keyword_filter(all, config.keyword); });
  report.total_tweets = filtered.size();
  if (filtered.empty()) {
    report.warnings.push_back("keyword \"" + config.keyword + "\" matched no tweets");
    return report;
  }

  std::vector<RelevanceVerdict> verdicts;
  if (config.method == RelevanceMethod::Kmeans) {
    verdicts = run_stage("relevance", [&] {
      return cluster_relevance(filtered, config.relevance_k, config.seed);
    });
  } else if (!config.verdicts_file.empty()) {
    verdicts =
        run_stage("relevance", [&] { return load_verdicts(config.verdicts_file); });
  } else {
    std::unique_ptr<EntailmentScorer> scorer;
    if (config.scorer_url.empty() || config.scorer_url == "mock")
      scorer = mock_scorer();
    else
      scorer = std::make_unique<HttpEntailmentScorer>(config.scorer_url);
    HypothesisConfig hypothesis;
    hypothesis.hypothesis_template = config.hypothesis;
    hypothesis.threshold = config.threshold;
    auto scored = run_stage("relevance", [&] {
      return zero_shot_classify(filtered, *scorer, hypothesis);
    });
    report.scorer_failures = scored.failed;
    verdicts = std::move(scored.verdicts);
  }

  const auto kept =
      run_stage("relevance", [&] { return filter_relevant(verdicts, filtered); });
  report.retention = kept.retention;
  report.relevant_tweets = kept.relevant.size();
  const auto& relevant = kept.relevant;
  if (relevant.empty()) {
    report.warnings.push_back("no tweets judged relevant; mining skipped");
    return report;
  }

  if (config.top_cves > 0) {
    auto rows = run_stage("cves", [&] {
      return count_mentions(relevant, report.period->first, report.period->second,
                            config.count_mode);
    });
    if (rows.size() > config.top_cves) rows.resize(config.top_cves);
    const bool has_remote = !config.nvd_url.empty();
    const bool has_cache = !config.cvss_cache.empty();
    if (!rows.empty() && (has_remote || has_cache)) {
      std::shared_ptr<NvdClient> remote;
      if (has_remote) remote = std::make_shared<HttpNvdClient>(config.nvd_url);
      std::shared_ptr<CvssCache> cache;
      if (has_cache)
        cache = run_stage("cves", [&] {
          return std::make_shared<CvssCache>(config.cvss_cache);
        });
      CvssSource source(remote, cache, config.cvss_ttl_seconds);
      for (auto& row : rows) {
        try {
          row.cvss3 = source.fetch(row.cve_id).cvss3;
        } catch (const ExternalServiceError& e) {
          report.warnings.push_back("cvss " + row.cve_id + ": " + e.what());
        }
      }
    } else if (!rows.empty()) {
      report.warnings.push_back("no CVSS source configured; scores omitted");
    }
    report.top_cves = std::move(rows);
    try {
      report.correlation = cvss_correlation(report.top_cves);
    } catch (const std::invalid_argument& e) {
      report.warnings.push_back(std::string("correlation unavailable: ") + e.what());
    }
  }

  EmbeddingHyperparams hp;
  hp.dim = config.embed_dim;
  hp.window = config.embed_window;
  hp.negative_samples = config.embed_negative;
  hp.epochs = config.embed_epochs;
  hp.min_count = config.embed_min_count;
  hp.seed = config.seed;
  const auto docs = tokenize_tweets(relevant);
  const auto model = run_stage("topics", [&] { return train_word2vec(docs, hp); });
  TopicMiningOptions topic_options;
  topic_options.k = config.topic_k;
  topic_options.k_scan.clear();
  for (std::uint32_t k = config.topic_scan_min; k <= config.topic_scan_max; ++k)
    topic_options.k_scan.push_back(k);
  topic_options.seed = config.seed;
  topic_options.unique_texts = config.topics_unique;
  const auto mined =
      run_stage("topics", [&] { return mine_topics(relevant, model, topic_options); });
  report.topics = mined.clusters;
  report.provenance["topics_k"] = std::to_string(mined.k);
  report.provenance["topics_dropped_all_oov"] = std::to_string(mined.dropped_all_oov);
  report.provenance["topics_dropped_duplicates"] =
      std::to_string(mined.dropped_duplicates);

  report.top_phrases = run_stage("phrases", [&] {
    return top_phrases(relevant, config.phrases_n, {config.ngram_lo, config.ngram_hi});
  });
  return report;
}

namespace {

nlohmann::json range_json(const std::optional<std::pair<std::int64_t, std::int64_t>>& r) {
  if (!r) return nullptr;
  nlohmann::json j;
  j["start"] = format_rfc3339_utc(r->first);
  j["end"] = format_rfc3339_utc(r->second);
  return j;
}

std::int64_t json_time(const nlohmann::json& v) {
  const auto t = parse_rfc3339(v.get<std::string>());
  if (!t) throw DataError("report: bad timestamp " + v.get<std::string>());
  return *t;
}

nlohmann::json report_to_json(const Report& r) {
  nlohmann::json j;
  j["period"] = range_json(r.period);
  nlohmann::json stats;
  stats["tweet_count"] = r.corpus_stats.tweet_count;
  stats["avg_tweets_per_day"] = r.corpus_stats.avg_tweets_per_day;
  stats["avg_words_per_tweet"] = r.corpus_stats.avg_words_per_tweet;
  stats["pct_english"] = r.corpus_stats.pct_english;
  stats["pct_with_url"] = r.corpus_stats.pct_with_url;
  stats["date_range"] = range_json(r.corpus_stats.date_range);
  j["corpus_stats"] = stats;
  j["method"] = to_string(r.method);
  j["retention"] = r.retention;
  j["total_tweets"] = r.total_tweets;
  j["relevant_tweets"] = r.relevant_tweets;
  j["scorer_failures"] = r.scorer_failures;
  auto cves = nlohmann::json::array();
  for (const auto& row : r.top_cves) {
    nlohmann::json c;
    c["cve_id"] = row.cve_id;
    c["tweet_count"] = row.tweet_count;
    c["cvss3"] = row.cvss3 ? nlohmann::json(*row.cvss3) : nlohmann::json(nullptr);
    cves.push_back(c);
  }
  j["top_cves"] = cves;
  if (r.correlation) {
    nlohmann::json c;
    c["r"] = r.correlation->r;
    c["used_rows"] = r.correlation->used_rows;
    c["excluded_rows"] = r.correlation->excluded_rows;
    j["correlation"] = c;
  } else {
    j["correlation"] = nullptr;
  }
  auto topics = nlohmann::json::array();
  for (const auto& cluster : r.topics) {
    nlohmann::json t;
    t["id"] = cluster.id;
    t["tweet_count"] = cluster.tweet_count;
    t["keywords"] = cluster.keywords;
    topics.push_back(t);
  }
  j["topics"] = topics;
  auto phrases = nlohmann::json::array();
  for (const auto& [phrase, count] : r.top_phrases) {
    nlohmann::json p;
    p["phrase"] = phrase;
    p["count"] = count;
    phrases.push_back(p);
  }
  j["top_phrases"] = phrases;
  j["provenance"] = r.provenance;
  j["warnings"] = r.warnings;
  return j;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string render_json(const Report& report) {
  return report_to_json(report).dump(2) + "\n";
}

Report parse_report(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw DataError("report: invalid JSON");
  try {
    Report r;
    if (!j.at("period").is_null())
      r.period = std::make_pair(json_time(j.at("period").at("start")),
                                json_time(j.at("period").at("end")));
    const auto& stats = j.at("corpus_stats");
    r.corpus_stats.tweet_count = stats.at("tweet_count").get<std::size_t>();
    r.corpus_stats.avg_tweets_per_day = stats.at("avg_tweets_per_day").get<double>();
    r.corpus_stats.avg_words_per_tweet = stats.at("avg_words_per_tweet").get<double>();
    r.corpus_stats.pct_english = stats.at("pct_english").get<double>();
    r.corpus_stats.pct_with_url = stats.at("pct_with_url").get<double>();
    if (!stats.at("date_range").is_null())
      r.corpus_stats.date_range =
          std::make_pair(json_time(stats.at("date_range").at("start")),
                         json_time(stats.at("date_range").at("end")));
    r.method = relevance_method_from_string(j.at("method").get<std::string>());
    r.retention = j.at("retention").get<double>();
    r.total_tweets = j.at("total_tweets").get<std::uint64_t>();
    r.relevant_tweets = j.at("relevant_tweets").get<std::uint64_t>();
    r.scorer_failures = j.at("scorer_failures").get<std::uint64_t>();
    for (const auto& row : j.at("top_cves")) {
      CveCountRow c;
      c.cve_id = row.at("cve_id").get<std::string>();
      c.tweet_count = row.at("tweet_count").get<std::uint64_t>();
      if (!row.at("cvss3").is_null()) c.cvss3 = row.at("cvss3").get<double>();
      r.top_cves.push_back(std::move(c));
    }
    if (!j.at("correlation").is_null()) {
      CorrelationResult c;
      c.r = j.at("correlation").at("r").get<double>();
      c.used_rows = j.at("correlation").at("used_rows").get<std::size_t>();
      c.excluded_rows = j.at("correlation").at("excluded_rows").get<std::size_t>();
      r.correlation = c;
    }
    for (const auto& row : j.at("topics")) {
      TopicCluster t;
      t.id = row.at("id").get<std::uint32_t>();
      t.tweet_count = row.at("tweet_count").get<std::uint64_t>();
      t.keywords = row.at("keywords").get<std::vector<std::string>>();
      r.topics.push_back(std::move(t));
    }
    for (const auto& row : j.at("top_phrases"))
      r.top_phrases.emplace_back(row.at("phrase").get<std::string>(),
                                 row.at("count").get<std::uint64_t>());
    r.provenance = j.at("provenance").get<std::map<std::string, std::string>>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("report: ") + e.what());
  }
}

std::string render_markdown(const Report& report) {
  std::string out = "# VulnWatch Report\n\n";
  if (report.period)
    out += "Period: " + format_rfc3339_utc(report.period->first) + " to " +
           format_rfc3339_utc(report.period->second) + "\n\n";
  else
    out += "Period: (none)\n\n";

  out += "## Corpus\n\n";
  out += "| Metric | Value |\n|---|---|\n";
  out += "| Tweets | " + std::to_string(report.corpus_stats.tweet_count) + " |\n";
  out += "| Avg tweets/day | " + fixed(report.corpus_stats.avg_tweets_per_day, 2) +
         " |\n";
  out += "| Avg words/tweet | " + fixed(report.corpus_stats.avg_words_per_tweet, 2) +
         " |\n";
  out += "| English | " + fixed(report.corpus_stats.pct_english, 2) + "% |\n";
  out += "| With URL | " + fixed(report.corpus_stats.pct_with_url, 2) + "% |\n\n";

  out += "## Relevance\n\n";
  out += "- Method: " + to_string(report.method) + "\n";
  out += "- Tweets after keyword filter: " + std::to_string(report.total_tweets) + "\n";
  out += "- Relevant: " + std::to_string(report.relevant_tweets) + " (retention " +
         fixed(report.retention * 100.0, 2) + "%)\n";
  out += "- Scorer failures: " + std::to_string(report.scorer_failures) + "\n\n";

  out += "## Top CVEs\n\n";
  if (report.top_cves.empty()) {
    out += "(none)\n\n";
  } else {
    out += "| CVE | Tweets | CVSS3 |\n|---|---|---|\n";
    for (const auto& row : report.top_cves)
      out += "| " + row.cve_id + " | " + std::to_string(row.tweet_count) + " | " +
             (row.cvss3 ? fixed(*row.cvss3, 1) : std::string("N/A")) + " |\n";
    out += "\n";
  }
  if (report.correlation)
    out += "Correlation (tweet count vs CVSS3): r = " + fixed(report.correlation->r, 2) +
           " over " + std::to_string(report.correlation->used_rows) + " rows (" +
           std::to_string(report.correlation->excluded_rows) + " excluded)\n\n";

  out += "## Topics\n\n";
  if (report.topics.empty()) {
    out += "(none)\n\n";
  } else {
    out += "| Cluster | Tweets | Keywords |\n|---|---|---|\n";
    for (const auto& cluster : report.topics) {
      std::string keywords;
      for (const auto& k : cluster.keywords) {
        if (!keywords.empty()) keywords += ", ";
        keywords += k;
      }
      out += "| " + std::to_string(cluster.id) + " | " +
             std::to_string(cluster.tweet_count) + " | " + keywords + " |\n";
    }
    out += "\n";
  }

  out += "## Top Phrases\n\n";
  if (report.top_phrases.empty()) {
    out += "(none)\n\n";
  } else {
    out += "| Phrase | Count |\n|---|---|\n";
    for (const auto& [phrase, count] : report.top_phrases)
      out += "| " + phrase + " | " + std::to_string(count) + " |\n";
    out += "\n";
  }

  if (!report.warnings.empty()) {
    out += "## Warnings\n\n";
    for (const auto& w : report.warnings) out += "- " + w + "\n";
    out += "\n";
  }

  out += "## Provenance\n\n";
  for (const auto& [key, value] : report.provenance)
    out += "- " + key + ": " + value + "\n";
  return out;
}

void render_csv(const Report& report, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw DataError("cannot create directory: " + directory.string());

  const auto open = [&](const char* name) {
    std::ofstream f(directory / name, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write " + (directory / name).string());
    return f;
  };

  {
    auto f = open("summary.csv");
    f << "metric,value\n";
    f << "method," << to_string(report.method) << "\n";
    f << "retention," << num(report.retention) << "\n";
    f << "total_tweets," << report.total_tweets << "\n";
    f << "relevant_tweets," << report.relevant_tweets << "\n";
    f << "scorer_failures," << report.scorer_failures << "\n";
    f << "period_start,"
      << (report.period ? format_rfc3339_utc(report.period->first) : "NA") << "\n";
    f << "period_end,"
      << (report.period ? format_rfc3339_utc(report.period->second) : "NA") << "\n";
    f << "correlation_r," << (report.correlation ? num(report.correlation->r) : "NA")
      << "\n";
    f << "correlation_used_rows,"
      << (report.correlation ? std::to_string(report.correlation->used_rows) : "NA")
      << "\n";
    f << "correlation_excluded_rows,"
      << (report.correlation ? std::to_string(report.correlation->excluded_rows)
                             : "NA")
      << "\n";
  }
  {
    auto f = open("corpus_stats.csv");
    f << "metric,value\n";
    f << "tweet_count," << report.corpus_stats.tweet_count << "\n";
    f << "avg_tweets_per_day," << num(report.corpus_stats.avg_tweets_per_day) << "\n";
    f << "avg_words_per_tweet," << num(report.corpus_stats.avg_words_per_tweet)
      << "\n";
    f << "pct_english," << num(report.corpus_stats.pct_english) << "\n";
    f << "pct_with_url," << num(report.corpus_stats.pct_with_url) << "\n";
    f << "range_start,"
      << (report.corpus_stats.date_range
              ? format_rfc3339_utc(report.corpus_stats.date_range->first)
              : "NA")
      << "\n";
    f << "range_end,"
      << (report.corpus_stats.date_range
              ? format_rfc3339_utc(report.corpus_stats.date_range->second)
              : "NA")
      << "\n";
  }
  {
    auto f = open("top_cves.csv");
    f << "cve_id,tweet_count,cvss3\n";
    for (const auto& row : report.top_cves)
      f << row.cve_id << ',' << row.tweet_count << ','
        << (row.cvss3 ? fixed(*row.cvss3, 1) : std::string("NA")) << "\n";
  }
  {
    auto f = open("topics.csv");
    f << "cluster_id,tweet_count,keywords\n";
    for (const auto& cluster : report.topics) {
      std::string keywords;
      for (const auto& k : cluster.keywords) {
        if (!keywords.empty()) keywords += ' ';
        keywords += k;
      }
      f << cluster.id << ',' << cluster.tweet_count << ',' << csv_escape(keywords)
        << "\n";
    }
  }
  {
    auto f = open("top_phrases.csv");
    f << "phrase,count\n";
    for (const auto& [phrase, count] : report.top_phrases)
      f << csv_escape(phrase) << ',' << count << "\n";
  }
  {
    auto f = open("provenance.csv");
    f << "key,value\n";
    for (const auto& [key, value] : report.provenance)
      f << csv_escape(key) << ',' << csv_escape(value) << "\n";
  }
  {
    auto f = open("warnings.csv");
    f << "warning\n";
    for (const auto& w : report.warnings) f << csv_escape(w) << "\n";
  }
}

}  // namespace vulnwatch
