#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vulnwatch {

/// One ingested social-media post.
struct Tweet {
  std::string id;
  std::int64_t created_at = 0;  // UTC epoch seconds
  std::string text;
  std::string lang;  // two-letter code or "und"
  std::vector<std::string> urls;
  std::optional<std::string> author_id;

  bool operator==(const Tweet&) const = default;
};

struct CorpusStats {
  std::size_t tweet_count = 0;
  double avg_tweets_per_day = 0.0;
  double avg_words_per_tweet = 0.0;
  double pct_english = 0.0;
  double pct_with_url = 0.0;
  std::optional<std::pair<std::int64_t, std::int64_t>> date_range;

  bool operator==(const CorpusStats&) const = default;
};

enum class Strictness { Strict, SkipAndCount };
enum class DuplicatePolicy { KeepFirst, Reject };

struct ReadResult {
  std::vector<Tweet> tweets;
  std::size_t malformed = 0;
  std::size_t duplicates = 0;  // dropped under KeepFirst
};

/// Serialize one tweet as a single archive line (no trailing newline).
/// Fields: id, created_at (RFC 3339 UTC), text, lang, urls, author_id.
std::string tweet_to_line(const Tweet& tweet);

/// Parse one archive line; nullopt if the record is malformed.
std::optional<Tweet> tweet_from_line(std::string_view line);

/// Read a line-delimited archive. In Strict mode the first malformed line
/// raises DataError (message carries the line number); in SkipAndCount mode
/// malformed lines are counted and skipped. Duplicate ids are dropped
/// (KeepFirst) or raise DataError (Reject).
ReadResult read_corpus(const std::filesystem::path& path, Strictness strictness,
                       DuplicatePolicy duplicates = DuplicatePolicy::KeepFirst);

/// Write tweets to an archive, one line per record.
void write_corpus(const std::filesystem::path& path, std::span<const Tweet> tweets);

/// Case-insensitive ASCII substring test.
bool contains_ci(std::string_view haystack, std::string_view needle);

/// Tweets whose text contains the keyword case-insensitively, order preserved.
std::vector<Tweet> keyword_filter(std::span<const Tweet> tweets, std::string_view keyword);

/// Corpus summary. avg_tweets_per_day divides by the number of UTC calendar
/// days between min and max created_at inclusive; a "word" is a maximal run
/// of non-whitespace in the raw text. Empty input yields zeroed stats and no
/// date_range.
CorpusStats compute_stats(std::span<const Tweet> tweets);

}  // namespace vulnwatch
