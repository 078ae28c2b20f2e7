#include "vulnwatch/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_set>

#include "json.hpp"
#include "vulnwatch/errors.hpp"
#include "vulnwatch/time.hpp"

namespace vulnwatch {

namespace {

using nlohmann::json;

bool valid_lang(std::string_view lang) {
  if (lang == "und") return true;
  return lang.size() == 2 &&
         std::islower(static_cast<unsigned char>(lang[0])) &&
         std::islower(static_cast<unsigned char>(lang[1]));
}

bool all_whitespace(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

}  // namespace

std::string tweet_to_line(const Tweet& tweet) {
  json j;
  j["id"] = tweet.id;
  j["created_at"] = format_rfc3339_utc(tweet.created_at);
  j["text"] = tweet.text;
  j["lang"] = tweet.lang;
  j["urls"] = tweet.urls;
  if (tweet.author_id)
    j["author_id"] = *tweet.author_id;
  else
    j["author_id"] = nullptr;
  return j.dump();
}

std::optional<Tweet> tweet_from_line(std::string_view line) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object()) return std::nullopt;
  if (!j.contains("id") || !j["id"].is_string()) return std::nullopt;
  if (!j.contains("created_at") || !j["created_at"].is_string()) return std::nullopt;
  if (!j.contains("text") || !j["text"].is_string()) return std::nullopt;
  if (!j.contains("lang") || !j["lang"].is_string()) return std::nullopt;
  if (!j.contains("urls") || !j["urls"].is_array()) return std::nullopt;
  if (!j.contains("author_id")) return std::nullopt;

  Tweet t;
  t.id = j["id"].get<std::string>();
  if (t.id.empty()) return std::nullopt;

  const auto ts = parse_rfc3339(j["created_at"].get<std::string>());
  if (!ts) return std::nullopt;
  t.created_at = *ts;

  t.text = j["text"].get<std::string>();
  if (t.text.empty() || all_whitespace(t.text)) return std::nullopt;

  t.lang = j["lang"].get<std::string>();
  if (!valid_lang(t.lang)) return std::nullopt;

  for (const auto& u : j["urls"]) {
    if (!u.is_string()) return std::nullopt;
    t.urls.push_back(u.get<std::string>());
  }

  const auto& author = j["author_id"];
  if (author.is_string())
    t.author_id = author.get<std::string>();
  else if (!author.is_null())
    return std::nullopt;
  return t;
}

ReadResult read_corpus(const std::filesystem::path& path, Strictness strictness,
                       DuplicatePolicy duplicates) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open corpus archive: " + path.string());

  ReadResult result;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto tweet = tweet_from_line(line);
    if (!tweet) {
      if (strictness == Strictness::Strict)
        throw DataError("malformed record at line " + std::to_string(line_no) +
                        " of " + path.string());
      ++result.malformed;
      continue;
    }
    if (!seen.insert(tweet->id).second) {
      if (duplicates == DuplicatePolicy::Reject)
        throw DataError("duplicate tweet id '" + tweet->id + "' at line " +
                        std::to_string(line_no));
      ++result.duplicates;
      continue;
    }
    result.tweets.push_back(std::move(*tweet));
  }
  return result;
}

void write_corpus(const std::filesystem::path& path, std::span<const Tweet> tweets) {
  std::ofstream out(path, std::ios::trunc);
  if (!out)
    throw DataError("cannot open archive for writing: " + path.string());
  for (const auto& t : tweets) out << tweet_to_line(t) << '\n';
  out.flush();
  if (!out)
    throw DataError("write failed: " + path.string());
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return true;
  if (needle.size() > haystack.size()) return false;
  auto lower = [](unsigned char c) { return static_cast<char>(std::tolower(c)); };
  for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < needle.size(); ++j) {
      if (lower(haystack[i + j]) != lower(needle[j])) {
        match = false;
        break;
      }
    }
    if (match) return true;
  }
  return false;
}

std::vector<Tweet> keyword_filter(std::span<const Tweet> tweets,
                                  std::string_view keyword) {
  if (keyword.empty()) throw std::invalid_argument("keyword must be non-empty");
  std::vector<Tweet> out;
  for (const auto& t : tweets)
    if (contains_ci(t.text, keyword)) out.push_back(t);
  return out;
}

CorpusStats compute_stats(std::span<const Tweet> tweets) {
  CorpusStats stats;
  stats.tweet_count = tweets.size();
  if (tweets.empty()) return stats;

  std::int64_t min_ts = tweets.front().created_at;
  std::int64_t max_ts = tweets.front().created_at;
  std::size_t total_words = 0;
  std::size_t english = 0;
  std::size_t with_url = 0;
  for (const auto& t : tweets) {
    min_ts = std::min(min_ts, t.created_at);
    max_ts = std::max(max_ts, t.created_at);
    bool in_word = false;
    for (unsigned char c : t.text) {
      if (std::isspace(c)) {
        in_word = false;
      } else if (!in_word) {
        in_word = true;
        ++total_words;
      }
    }
    if (t.lang == "en") ++english;
    if (!t.urls.empty()) ++with_url;
  }

  const auto n = static_cast<double>(tweets.size());
  const std::int64_t days = utc_day(max_ts) - utc_day(min_ts) + 1;
  stats.avg_tweets_per_day = n / static_cast<double>(days);
  stats.avg_words_per_tweet = static_cast<double>(total_words) / n;
  stats.pct_english = 100.0 * static_cast<double>(english) / n;
  stats.pct_with_url = 100.0 * static_cast<double>(with_url) / n;
  stats.date_range = {min_ts, max_ts};
  return stats;
}

}  // namespace vulnwatch
