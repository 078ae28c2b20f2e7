#include "vulnwatch/cve.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <regex>
#include <stdexcept>
#include <unordered_set>

namespace vulnwatch {

namespace {

const std::regex& cve_pattern() {
  static const std::regex re(R"(CVE-\d{4}-\d{4,})", std::regex::icase);
  return re;
}

std::string to_upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

}  // namespace

bool is_canonical_cve(std::string_view id) {
  if (id.size() < 13 || id.substr(0, 4) != "CVE-") return false;
  for (std::size_t i = 4; i < 8; ++i)
    if (!std::isdigit(static_cast<unsigned char>(id[i]))) return false;
  if (id[8] != '-') return false;
  if (id.size() - 9 < 4) return false;
  for (std::size_t i = 9; i < id.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(id[i]))) return false;
  return true;
}

std::vector<std::string> extract_cve_occurrences(std::string_view text) {
  std::vector<std::string> out;
  auto begin = std::cregex_iterator(text.data(), text.data() + text.size(), cve_pattern());
  for (auto it = begin; it != std::cregex_iterator(); ++it)
    out.push_back(to_upper(it->str()));
  return out;
}

std::vector<std::string> extract_cves(std::string_view text) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (auto& id : extract_cve_occurrences(text))
    if (seen.insert(id).second) out.push_back(std::move(id));
  return out;
}

std::vector<CveMention> collect_mentions(std::span<const Tweet> tweets,
                                         std::int64_t start, std::int64_t end) {
  if (start > end) throw std::invalid_argument("window start exceeds end");
  std::vector<CveMention> mentions;
  for (const auto& t : tweets) {
    if (t.created_at < start || t.created_at > end) continue;
    for (auto& id : extract_cves(t.text))
      mentions.push_back({std::move(id), t.id, t.created_at});
  }
  return mentions;
}

std::vector<CveCountRow> count_mentions(std::span<const Tweet> tweets,
                                        std::int64_t start, std::int64_t end,
                                        CountMode mode) {
  if (start > end) throw std::invalid_argument("window start exceeds end");
  std::map<std::string, std::uint64_t> counts;
  for (const auto& t : tweets) {
    if (t.created_at < start || t.created_at > end) continue;
    const auto ids = mode == CountMode::PerTweet ? extract_cves(t.text)
                                                 : extract_cve_occurrences(t.text);
    for (const auto& id : ids) ++counts[id];
  }
  std::vector<CveCountRow> rows;
  rows.reserve(counts.size());
  for (const auto& [id, count] : counts) rows.push_back({id, count, std::nullopt});
  std::sort(rows.begin(), rows.end(), [](const CveCountRow& a, const CveCountRow& b) {
    if (a.tweet_count != b.tweet_count) return a.tweet_count > b.tweet_count;
    return a.cve_id < b.cve_id;
  });
  return rows;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("need at least two observations");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::invalid_argument("zero variance in one of the variables");
  return sxy / std::sqrt(sxx * syy);
}

CorrelationResult cvss_correlation(std::span<const CveCountRow> rows) {
  std::vector<double> counts;
  std::vector<double> scores;
  std::size_t excluded = 0;
  for (const auto& row : rows) {
    if (row.cvss3) {
      counts.push_back(static_cast<double>(row.tweet_count));
      scores.push_back(*row.cvss3);
    } else {
      ++excluded;
    }
  }
  CorrelationResult result;
  result.used_rows = counts.size();
  result.excluded_rows = excluded;
  result.r = pearson(counts, scores);
  return result;
}

}  // namespace vulnwatch
