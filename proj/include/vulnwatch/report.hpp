#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vulnwatch/corpus.hpp"
#include "vulnwatch/cve.hpp"
#include "vulnwatch/relevance.hpp"
#include "vulnwatch/topics.hpp"

namespace vulnwatch {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class ReportFormat { Markdown, Json, Csv };

/// Accepts markdown, json (alias machine-readable), csv. Throws ConfigError.
ReportFormat report_format_from_string(std::string_view name);
std::string to_string(ReportFormat format);

/// Every field maps to one flat config key of the same name (topic_k accepts
/// "auto"). Values resolve CLI flag > environment (VULNWATCH_<UPPER KEY>) >
/// config file > default.
struct PipelineConfig {
  std::string keyword = "vulnerability";
  RelevanceMethod method = RelevanceMethod::Zeroshot;
  std::string hypothesis = "This text is related to cyber security";
  double threshold = 0.5;
  std::uint32_t relevance_k = 2;
  std::optional<std::uint32_t> topic_k = 10;  // nullopt: elbow over the scan
  std::uint32_t topic_scan_min = 2;
  std::uint32_t topic_scan_max = 15;
  bool topics_unique = false;
  std::uint64_t seed = 0;
  std::string scorer_url;     // empty or "mock": built-in keyword scorer
  std::string verdicts_file;  // precomputed zero-shot verdicts, skips scoring
  std::string nvd_url = "https://services.nvd.nist.gov/rest/json/cves/2.0";
  std::string cvss_cache;  // cache file path; empty disables the cache
  std::int64_t cvss_ttl_seconds = 7 * 24 * 3600;
  Strictness strictness = Strictness::SkipAndCount;
  ReportFormat format = ReportFormat::Markdown;
  std::uint32_t top_cves = 5;
  CountMode count_mode = CountMode::PerTweet;
  std::uint32_t phrases_n = 10;
  std::uint32_t ngram_lo = 1;
  std::uint32_t ngram_hi = 3;
  std::string window_start;  // RFC 3339; empty = corpus minimum
  std::string window_end;    // RFC 3339; empty = corpus maximum
  std::uint32_t embed_dim = 100;
  std::uint32_t embed_window = 5;
  std::uint32_t embed_negative = 5;
  std::uint32_t embed_epochs = 5;
  std::uint32_t embed_min_count = 5;

  /// Canonical key=value view of every field, for provenance.
  std::map<std::string, std::string> snapshot() const;
};

/// Known config keys in canonical order.
std::vector<std::string> config_keys();

/// Flat "key = value" lines; '#' starts a comment. Throws ConfigError on
/// unreadable files, bad lines, or repeated keys.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// VULNWATCH_<UPPERCASED KEY> for every known key found in the environment.
std::map<std::string, std::string> env_config_overrides();

/// defaults <- file <- env <- cli; unknown keys or unparseable values raise
/// ConfigError.
PipelineConfig make_config(const std::map<std::string, std::string>& file_values,
                           const std::map<std::string, std::string>& env_values = {},
                           const std::map<std::string, std::string>& cli_values = {});

struct Report {
  std::optional<std::pair<std::int64_t, std::int64_t>> period;
  CorpusStats corpus_stats;
  RelevanceMethod method = RelevanceMethod::Zeroshot;
  double retention = 0.0;
  std::uint64_t total_tweets = 0;  // after the keyword filter
  std::uint64_t relevant_tweets = 0;
  std::uint64_t scorer_failures = 0;
  std::vector<CveCountRow> top_cves;
  std::optional<CorrelationResult> correlation;
  std::vector<TopicCluster> topics;
  std::vector<std::pair<std::string, std::uint64_t>> top_phrases;
  std::map<std::string, std::string> provenance;  // config snapshot + run facts
  std::vector<std::string> warnings;

  bool operator==(const Report&) const = default;
};

/// Contiguous token n-grams over the shared tokenizer's output, n-grams made
/// only of stopwords excluded; top n by count, ties lexicographic. Requires
/// 1 <= lo <= hi <= 3 (std::invalid_argument otherwise).
std::vector<std::pair<std::string, std::uint64_t>> top_phrases(
    std::span<const Tweet> tweets, std::size_t n,
    std::pair<std::uint32_t, std::uint32_t> ngram_range = {1, 3});

/// Full pipeline: ingest, keyword filter, relevance, CVE mining, topics,
/// phrases. Deterministic for a fixed (config, corpus, scorer). Module errors
/// propagate with a "<stage>: " prefix. An empty corpus (or one the keyword
/// or relevance stage empties) yields a report with the tables omitted and a
/// warning instead of an error.
Report build_report(const PipelineConfig& config, const std::filesystem::path& corpus);

std::string render_markdown(const Report& report);

/// Machine-readable rendering; byte-stable for equal reports and lossless:
/// parse_report(render_json(r)) == r.
std::string render_json(const Report& report);
Report parse_report(const std::string& json_text);

/// One CSV file per table inside directory (created if missing):
/// summary.csv, corpus_stats.csv, top_cves.csv, topics.csv, top_phrases.csv,
/// provenance.csv, warnings.csv.
void render_csv(const Report& report, const std::filesystem::path& directory);

}  // namespace vulnwatch
