#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cctype>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "vulnwatch/corpus.hpp"
#include "vulnwatch/cve.hpp"
#include "vulnwatch/time.hpp"

using namespace vulnwatch;

namespace {

// Character-by-character scanner, written independently of the regex:
// "CVE" (any case) '-' exactly-4 digits '-' 4-or-more digits, uppercased,
// first occurrence of each id kept.
std::vector<std::string> oracle_extract(const std::string& text) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  const auto n = text.size();
  for (std::size_t i = 0; i + 12 <= n; ++i) {
    if (std::toupper(static_cast<unsigned char>(text[i])) != 'C') continue;
    if (i + 3 >= n) break;
    if (std::toupper(static_cast<unsigned char>(text[i + 1])) != 'V') continue;
    if (std::toupper(static_cast<unsigned char>(text[i + 2])) != 'E') continue;
    if (text[i + 3] != '-') continue;
    std::size_t p = i + 4, year_digits = 0;
    while (p < n && std::isdigit(static_cast<unsigned char>(text[p])) &&
           year_digits < 5) {
      ++p;
      ++year_digits;
    }
    if (year_digits != 4) continue;
    if (p >= n || text[p] != '-') continue;
    ++p;
    std::size_t seq_start = p;
    while (p < n && std::isdigit(static_cast<unsigned char>(text[p]))) ++p;
    if (p - seq_start < 4) continue;
    std::string id = "CVE-" + text.substr(i + 4, 4) + "-" +
                     text.substr(seq_start, p - seq_start);
    if (seen.insert(id).second) out.push_back(id);
  }
  return out;
}

double pr(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(x, y);
}

Tweet make_tweet(std::string id, std::int64_t ts, std::string text) {
  Tweet t;
  t.id = std::move(id);
  t.created_at = ts;
  t.text = std::move(text);
  t.lang = "en";
  return t;
}

}  // namespace

TEST_CASE("extraction hand cases") {
  CHECK(extract_cves("CVE-2020-0688") == std::vector<std::string>{"CVE-2020-0688"});
  CHECK(extract_cves("cve-2021-44228 hit") ==
        std::vector<std::string>{"CVE-2021-44228"});
  CHECK(extract_cves("(CVE-2019-19781)!") ==
        std::vector<std::string>{"CVE-2019-19781"});
  CHECK(extract_cves("Cve-2020-0601 and cVe-2020-0601 again") ==
        std::vector<std::string>{"CVE-2020-0601"});  // dedupe, keep first
  CHECK(extract_cves("b CVE-2022-1111 a CVE-2020-9999") ==
        std::vector<std::string>{"CVE-2022-1111", "CVE-2020-9999"});  // text order
  CHECK(extract_cves("").empty());
  CHECK(extract_cves("CVE-123-4567").empty());    // three-digit year
  CHECK(extract_cves("CVE-2020-1").empty());      // short sequence
  CHECK(extract_cves("CVE-2020-123").empty());
  CHECK(extract_cves("CVE_2020_1234").empty());
  CHECK(extract_cves("XCVE-2020-12345") ==
        std::vector<std::string>{"CVE-2020-12345"});  // prefix junk is fine
}

TEST_CASE("is_canonical_cve") {
  CHECK(is_canonical_cve("CVE-2020-0688"));
  CHECK(is_canonical_cve("CVE-1999-123456"));
  CHECK_FALSE(is_canonical_cve("cve-2020-0688"));  // canonical means uppercase
  CHECK_FALSE(is_canonical_cve("CVE-2020-068"));
  CHECK_FALSE(is_canonical_cve(" CVE-2020-0688"));
  CHECK_FALSE(is_canonical_cve("CVE-2020-0688x"));
}

TEST_CASE("fuzz agreement with the independent scanner") {
  std::mt19937_64 rng(41);
  const std::string pieces[] = {"CVE",  "cve",  "CvE",  "-",    "20",   "2020",
                                "0688", "1",    "12",   "4422", "x",    " ",
                                ".",    "CVE-", "-CVE", "99",   "00",   "haha",
                                "cve-2021-", "-2020-", "44228"};
  std::uniform_int_distribution<std::size_t> pick(0, std::size(pieces) - 1);
  std::uniform_int_distribution<int> n_pieces(0, 12);
  for (int i = 0; i < 3000; ++i) {
    std::string text;
    for (int j = n_pieces(rng); j > 0; --j) text += pieces[pick(rng)];
    CAPTURE(text);
    CHECK(extract_cves(text) == oracle_extract(text));
  }
}

TEST_CASE("occurrences carry tweet ids and respect the window") {
  const auto t0 = *parse_rfc3339("2020-01-01T00:00:00Z");
  const std::vector<Tweet> tweets = {
      make_tweet("a", t0, "CVE-2020-0688 twice CVE-2020-0688"),
      make_tweet("b", t0 + 86400, "CVE-2020-0688 and CVE-2020-0601"),
      make_tweet("c", t0 + 2 * 86400, "CVE-2099-9999 out of window"),
  };
  const auto window_end = t0 + 86400;

  const auto per_tweet = count_mentions(tweets, t0, window_end, CountMode::PerTweet);
  REQUIRE(per_tweet.size() == 2);
  CHECK(per_tweet[0].cve_id == "CVE-2020-0688");
  CHECK(per_tweet[0].tweet_count == 2);  // duplicate within one tweet counted once
  CHECK(per_tweet[1].cve_id == "CVE-2020-0601");
  CHECK(per_tweet[1].tweet_count == 1);

  const auto per_occ = count_mentions(tweets, t0, window_end, CountMode::PerOccurrence);
  CHECK(per_occ[0].tweet_count == 3);  // the double mention now counts twice

  const auto mentions = collect_mentions(tweets, t0, t0 + 3 * 86400);
  REQUIRE(mentions.size() == 4);  // one per (tweet, distinct CVE)
  for (const auto& m : mentions) CHECK(is_canonical_cve(m.cve_id));
  CHECK(mentions[0].tweet_id == "a");
  CHECK(mentions[3].cve_id == "CVE-2099-9999");
  CHECK(mentions[3].created_at == t0 + 2 * 86400);
}

TEST_CASE("count ordering is count desc then id asc and the window validates") {
  const std::vector<Tweet> tweets = {
      make_tweet("a", 100, "CVE-2020-0002"),
      make_tweet("b", 100, "CVE-2020-0001"),
      make_tweet("c", 100, "CVE-2020-0001"),
      make_tweet("d", 100, "CVE-2020-0003"),
  };
  const auto rows = count_mentions(tweets, 0, 200, CountMode::PerTweet);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].cve_id == "CVE-2020-0001");
  CHECK(rows[1].cve_id == "CVE-2020-0002");  // tie with 0003 -> id order
  CHECK(rows[2].cve_id == "CVE-2020-0003");
  CHECK_THROWS_AS(count_mentions(tweets, 200, 100, CountMode::PerTweet),
                  std::invalid_argument);
}

TEST_CASE("pearson hand values") {
  CHECK(pr({1, 2, 3}, {3, 2, 1}) == -1.0);
  CHECK(pr({1, 2, 3}, {1, 2, 3}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pr({1, 2, 3, 4}, {2, 4, 6, 8}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pr({1, 2, 3, 4}, {1, 3, 2, 4}) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK_THROWS_AS(pr({1, 1, 1}, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(pr({1}, {2}), std::invalid_argument);
  CHECK_THROWS_AS(pr({1, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("pearson matches a long-double two-pass oracle") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::size_t> len(2, 50);
  std::uniform_real_distribution<double> val(-100.0, 100.0);
  int checked = 0;
  while (checked < 500) {
    const auto n = len(rng);
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = val(rng);
    for (auto& v : y) v = val(rng);
    long double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
      mx += x[i];
      my += y[i];
    }
    mx /= n;
    my /= n;
    long double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
      syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0 || syy == 0) continue;
    const double expected = static_cast<double>(sxy / std::sqrt(sxx * syy));
    CHECK(std::abs(pearson(x, y) - expected) <= 1e-12);
    ++checked;
  }
}

TEST_CASE("cvss_correlation excludes unscored rows") {
  std::vector<CveCountRow> rows(4);
  rows[0] = {"CVE-2020-0001", 10, 9.8};
  rows[1] = {"CVE-2020-0002", 5, 7.5};
  rows[2] = {"CVE-2020-0003", 3, std::nullopt};
  rows[3] = {"CVE-2020-0004", 1, 5.0};
  const auto result = cvss_correlation(rows);
  CHECK(result.used_rows == 3);
  CHECK(result.excluded_rows == 1);
  CHECK(result.r == doctest::Approx(pr({10, 5, 1}, {9.8, 7.5, 5.0})));

  std::vector<CveCountRow> thin(2);
  thin[0] = {"CVE-2020-0001", 2, 8.0};
  thin[1] = {"CVE-2020-0002", 1, std::nullopt};
  CHECK_THROWS_AS(cvss_correlation(thin), std::invalid_argument);
}
