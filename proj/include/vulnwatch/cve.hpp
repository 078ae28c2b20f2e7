#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vulnwatch/corpus.hpp"

namespace vulnwatch {

struct CveMention {
  std::string cve_id;  // canonical uppercase "CVE-YYYY-NNNN+"
  std::string tweet_id;
  std::int64_t created_at = 0;

  bool operator==(const CveMention&) const = default;
};

struct CveCountRow {
  std::string cve_id;
  std::uint64_t tweet_count = 0;
  std::optional<double> cvss3;

  bool operator==(const CveCountRow&) const = default;
};

/// True iff the id is exactly CVE-<4 digits>-<4+ digits>, uppercase.
bool is_canonical_cve(std::string_view id);

/// Case-insensitive scan for CVE-\d{4}-\d{4,}. Matches are canonicalized to
/// uppercase and de-duplicated, keeping first-occurrence order.
std::vector<std::string> extract_cves(std::string_view text);

/// Every match in scan order, duplicates retained (per-occurrence counting).
std::vector<std::string> extract_cve_occurrences(std::string_view text);

enum class CountMode { PerTweet, PerOccurrence };

/// One CveMention per (tweet, distinct CVE) inside [start, end].
std::vector<CveMention> collect_mentions(std::span<const Tweet> tweets,
                                         std::int64_t start, std::int64_t end);

/// Per-CVE counts over the window, sorted by count descending then cve_id
/// ascending. PerTweet counts each tweet at most once per CVE; PerOccurrence
/// counts raw in-text occurrences.
std::vector<CveCountRow> count_mentions(std::span<const Tweet> tweets,
                                        std::int64_t start, std::int64_t end,
                                        CountMode mode = CountMode::PerTweet);

/// Sample Pearson correlation. Throws std::invalid_argument on fewer than
/// two observations or zero variance in either variable.
double pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationResult {
  double r = 0.0;
  std::size_t used_rows = 0;
  std::size_t excluded_rows = 0;  // rows without a CVSS3 score

  bool operator==(const CorrelationResult&) const = default;
};

/// Pearson correlation between tweet_count and cvss3 over rows with a
/// present score; rows without one are excluded and counted.
CorrelationResult cvss_correlation(std::span<const CveCountRow> rows);

}  // namespace vulnwatch
