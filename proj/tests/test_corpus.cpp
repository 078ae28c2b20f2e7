#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "vulnwatch/corpus.hpp"
#include "vulnwatch/csv.hpp"
#include "vulnwatch/errors.hpp"
#include "vulnwatch/time.hpp"

using namespace vulnwatch;
using testsupport::TempFile;

namespace {

Tweet make_tweet(std::string id, std::int64_t ts, std::string text,
                 std::string lang = "en") {
  Tweet t;
  t.id = std::move(id);
  t.created_at = ts;
  t.text = std::move(text);
  t.lang = std::move(lang);
  return t;
}

}  // namespace

TEST_CASE("rfc3339 hand values") {
  CHECK(parse_rfc3339("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_rfc3339("1970-01-02T00:00:00Z") == 86400);
  CHECK(parse_rfc3339("2020-02-29T12:00:00Z") == 1582977600);  // leap day
  CHECK(parse_rfc3339("2020-01-01T01:00:00+01:00") == parse_rfc3339("2020-01-01T00:00:00Z"));
  CHECK(parse_rfc3339("2020-01-01t00:00:00z") == parse_rfc3339("2020-01-01T00:00:00Z"));
  CHECK(parse_rfc3339("2020-01-01 00:00:00Z") == parse_rfc3339("2020-01-01T00:00:00Z"));
  CHECK(parse_rfc3339("2020-01-01T00:00:00.25Z") == parse_rfc3339("2020-01-01T00:00:00Z"));
  CHECK(format_rfc3339_utc(0) == "1970-01-01T00:00:00Z");
  CHECK(format_rfc3339_utc(-1) == "1969-12-31T23:59:59Z");
}

TEST_CASE("rfc3339 rejects malformed stamps") {
  for (const char* bad :
       {"", "2020", "2020-13-01T00:00:00Z", "2020-02-30T00:00:00Z",
        "2021-02-29T00:00:00Z", "2020-01-01T24:00:00Z", "2020-01-01T00:61:00Z",
        "2020-01-01T00:00:00", "2020-01-01T00:00:00Q", "2020-01-01T00:00:00Z ",
        "2020-01-01T00:00:00.Z", "2020-01-01T00:00:00+25:00",
        "x020-01-01T00:00:00Z"}) {
    CAPTURE(bad);
    CHECK_FALSE(parse_rfc3339(bad).has_value());
  }
}

TEST_CASE("rfc3339 round trip over random epochs") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> dist(-30610224000LL,  // year 1000
                                                   32503680000LL);  // year 3000
  for (int i = 0; i < 2000; ++i) {
    const auto ts = dist(rng);
    const auto text = format_rfc3339_utc(ts);
    const auto back = parse_rfc3339(text);
    REQUIRE(back.has_value());
    CHECK(*back == ts);
  }
}

TEST_CASE("tweet line round trip") {
  std::mt19937_64 rng(12);
  // Multi-byte sequences stay whole so every generated text is valid UTF-8.
  const std::vector<std::string> alphabet = {
      "a", "b", "c", " ", "X", "Y", "Z", "0", "9", "\"", "\\", "\t",
      ",", ";", "\xF0\x9F\x94\x92", "\xC3\xA9", "unicode", "{", "}"};
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(1, 60);
  std::uniform_int_distribution<std::int64_t> ts(0, 4102444800LL);
  for (int i = 0; i < 200; ++i) {
    Tweet t;
    t.id = "id-" + std::to_string(i);
    t.created_at = ts(rng);
    do {
      t.text.clear();
      for (int j = len(rng); j > 0; --j) t.text += alphabet[pick(rng)];
    } while (t.text.find_first_not_of(" \t\r\n") == std::string::npos);
    t.lang = i % 3 ? "en" : "und";
    if (i % 2) t.urls = {"https://example.com/" + std::to_string(i)};
    if (i % 5 == 0) t.author_id = "author" + std::to_string(i);
    const auto back = tweet_from_line(tweet_to_line(t));
    REQUIRE(back.has_value());
    CHECK(*back == t);
  }
}

TEST_CASE("malformed records are rejected") {
  for (const char* bad : {
           "not json",
           "[1,2]",
           "{\"id\":\"a\",\"created_at\":\"2020-01-01T00:00:00Z\",\"text\":\"x\",\"lang\":\"en\",\"urls\":[]}",  // no author_id
           "{\"id\":\"\",\"created_at\":\"2020-01-01T00:00:00Z\",\"text\":\"x\",\"lang\":\"en\",\"urls\":[],\"author_id\":null}",
           "{\"id\":\"a\",\"created_at\":\"2020-99-01T00:00:00Z\",\"text\":\"x\",\"lang\":\"en\",\"urls\":[],\"author_id\":null}",
           "{\"id\":\"a\",\"created_at\":\"2020-01-01T00:00:00Z\",\"text\":\"   \",\"lang\":\"en\",\"urls\":[],\"author_id\":null}",
           "{\"id\":\"a\",\"created_at\":\"2020-01-01T00:00:00Z\",\"text\":\"x\",\"lang\":\"english\",\"urls\":[],\"author_id\":null}",
           "{\"id\":\"a\",\"created_at\":\"2020-01-01T00:00:00Z\",\"text\":\"x\",\"lang\":\"en\",\"urls\":[7],\"author_id\":null}",
       }) {
    CAPTURE(bad);
    CHECK_FALSE(tweet_from_line(bad).has_value());
  }
}

TEST_CASE("read_corpus strictness and duplicates") {
  const std::string good =
      "{\"id\":\"a\",\"created_at\":\"2020-01-01T00:00:00Z\",\"text\":\"first\","
      "\"lang\":\"en\",\"urls\":[],\"author_id\":null}";
  const std::string dup =
      "{\"id\":\"a\",\"created_at\":\"2020-01-02T00:00:00Z\",\"text\":\"second\","
      "\"lang\":\"en\",\"urls\":[],\"author_id\":null}";
  TempFile f("corpus", good + "\nbroken\n" + dup + "\n");

  SUBCASE("skip mode counts") {
    const auto r = read_corpus(f.path, Strictness::SkipAndCount);
    CHECK(r.tweets.size() == 1);
    CHECK(r.tweets[0].text == "first");  // keep-first
    CHECK(r.malformed == 1);
    CHECK(r.duplicates == 1);
  }
  SUBCASE("strict mode names the line") {
    try {
      read_corpus(f.path, Strictness::Strict);
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("duplicate rejection") {
    CHECK_THROWS_AS(read_corpus(f.path, Strictness::SkipAndCount, DuplicatePolicy::Reject),
                    DataError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_corpus("no/such/file.jsonl", Strictness::SkipAndCount),
                    DataError);
  }
}

TEST_CASE("corpus file round trip") {
  std::vector<Tweet> tweets;
  for (int i = 0; i < 50; ++i)
    tweets.push_back(make_tweet("t" + std::to_string(i), 1577836800 + i * 3600,
                                "text number " + std::to_string(i)));
  TempFile f("roundtrip");
  write_corpus(f.path, tweets);
  const auto r = read_corpus(f.path, Strictness::Strict);
  CHECK(r.tweets == tweets);
  CHECK(r.malformed == 0);
  CHECK(r.duplicates == 0);
}

TEST_CASE("compute_stats hand corpus") {
  // 2020-01-01 .. 2020-01-03 inclusive = 3 calendar days, 4 tweets.
  std::vector<Tweet> tweets = {
      make_tweet("1", *parse_rfc3339("2020-01-01T08:00:00Z"), "one two three"),
      make_tweet("2", *parse_rfc3339("2020-01-01T09:00:00Z"), "four five", "de"),
      make_tweet("3", *parse_rfc3339("2020-01-03T10:00:00Z"), "six"),
      make_tweet("4", *parse_rfc3339("2020-01-02T11:00:00Z"), "seven eight nine ten"),
  };
  tweets[3].urls = {"https://example.com"};
  const auto stats = compute_stats(tweets);
  CHECK(stats.tweet_count == 4);
  CHECK(stats.avg_tweets_per_day == doctest::Approx(4.0 / 3.0));
  CHECK(stats.avg_words_per_tweet == doctest::Approx(10.0 / 4.0));
  CHECK(stats.pct_english == doctest::Approx(75.0));
  CHECK(stats.pct_with_url == doctest::Approx(25.0));
  REQUIRE(stats.date_range.has_value());
  CHECK(stats.date_range->first == *parse_rfc3339("2020-01-01T08:00:00Z"));
  CHECK(stats.date_range->second == *parse_rfc3339("2020-01-03T10:00:00Z"));
}

TEST_CASE("compute_stats edge cases") {
  CHECK(compute_stats({}).tweet_count == 0);
  CHECK_FALSE(compute_stats({}).date_range.has_value());

  const std::vector<Tweet> one = {make_tweet("1", 1577836800, "hello world")};
  const auto stats = compute_stats(one);
  CHECK(stats.avg_tweets_per_day == doctest::Approx(1.0));
  CHECK(stats.avg_words_per_tweet == doctest::Approx(2.0));
  CHECK(stats.date_range->first == stats.date_range->second);
}

TEST_CASE("keyword_filter is a case-insensitive substring match") {
  const std::vector<Tweet> tweets = {
      make_tweet("1", 0, "A new VULNERABILITY dropped"),
      make_tweet("2", 0, "more VuLnErAbIlItY chatter"),  // mixed case still hits
      make_tweet("3", 0, "nothing to see"),
  };
  const auto kept = keyword_filter(tweets, "vulnerability");
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].id == "1");
  CHECK(kept[1].id == "2");
  CHECK_THROWS_AS(keyword_filter(tweets, ""), std::invalid_argument);
}

TEST_CASE("csv escaping round trips through read_csv") {
  const std::vector<std::vector<std::string>> rows = {
      {"plain", "with,comma", "with\"quote"},
      {"multi\nline", "", "trailing space "},
      {"semi;colon", "tab\there", "fin"},
  };
  std::string text;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) text += ',';
      text += csv_escape(row[i]);
    }
    text += '\n';
  }
  TempFile f("csv", text);
  CHECK(read_csv(f.path) == rows);
}

TEST_CASE("read_csv handles quoted fields and custom delimiters") {
  TempFile f("csv2", "a;\"b;c\";\"d\"\"e\"\n1;2;3\n");
  const auto rows = read_csv(f.path, ';');
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"a", "b;c", "d\"e"});
  CHECK(rows[1] == std::vector<std::string>{"1", "2", "3"});
  CHECK_THROWS_AS(read_csv("missing.csv"), DataError);
}
