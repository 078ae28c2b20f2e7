#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vulnwatch/corpus.hpp"
#include "vulnwatch/scorer.hpp"

namespace vulnwatch {

enum class RelevanceMethod { Kmeans, Zeroshot };

std::string to_string(RelevanceMethod method);
RelevanceMethod relevance_method_from_string(std::string_view name);

/// One per-tweet relevance decision. Zero-shot verdicts satisfy
/// relevant == (score >= threshold) whenever a score is present; a missing
/// score marks a scorer failure (always relevant = false). K-means verdicts
/// carry cluster_id and a score of exactly 0.0 or 1.0.
struct RelevanceVerdict {
  std::string tweet_id;
  RelevanceMethod method = RelevanceMethod::Kmeans;
  bool relevant = false;
  std::optional<double> score;
  std::optional<std::uint32_t> cluster_id;

  bool operator==(const RelevanceVerdict&) const = default;
};

struct HypothesisConfig {
  std::string hypothesis_template = "This text is related to cyber security";
  double threshold = 0.5;
};

/// Per-tweet retry schedule plus the abort budget for a scorer that looks
/// permanently unreachable.
struct FailPolicy {
  std::uint32_t max_retries = 3;  // attempts per tweet = 1 + max_retries
  std::chrono::milliseconds initial_backoff{100};
  std::uint32_t failure_budget = 10;  // consecutive failed tweets before abort
};

struct ZeroShotOptions {
  FailPolicy fail_policy;
  std::uint32_t in_flight = 1;  // concurrent scorer calls
};

struct ZeroShotResult {
  std::vector<RelevanceVerdict> verdicts;  // input order
  std::size_t failed = 0;                  // verdicts with a missing score
};

/// TF-IDF + k-means, then a cluster is cyber-relevant iff at least one member
/// tweet mentions a CVE identifier; every tweet inherits its cluster's label.
/// Throws std::invalid_argument on an empty corpus or k unfit for its size.
std::vector<RelevanceVerdict> cluster_relevance(std::span<const Tweet> tweets,
                                                std::uint32_t k, std::uint64_t seed);

/// Scores every tweet text against the hypothesis template; relevant when
/// score >= threshold. Order is preserved. A tweet whose scorer calls exhaust
/// the retry schedule is marked relevant = false with no score; once
/// failure_budget consecutive tweets fail, throws ExternalServiceError.
/// Throws std::invalid_argument on an invalid config (empty template,
/// threshold outside (0,1), in_flight == 0).
ZeroShotResult zero_shot_classify(std::span<const Tweet> tweets, EntailmentScorer& scorer,
                                  const HypothesisConfig& config = {},
                                  const ZeroShotOptions& options = {});

struct FilterResult {
  std::vector<Tweet> relevant;
  double retention = 0.0;  // |relevant| / |tweets|
};

/// Keeps tweets whose verdict is relevant. Sequences must align index-by-index
/// on tweet id (std::invalid_argument otherwise, and on empty input).
FilterResult filter_relevant(std::span<const RelevanceVerdict> verdicts,
                             std::span<const Tweet> tweets);

/// Line-delimited JSON: tweet_id, method, relevant, and score / cluster_id
/// when present.
void save_verdicts(std::span<const RelevanceVerdict> verdicts,
                   const std::filesystem::path& path);
std::vector<RelevanceVerdict> load_verdicts(const std::filesystem::path& path);

}  // namespace vulnwatch
