#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <set>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "support.hpp"
#include "vulnwatch/corpus.hpp"
#include "vulnwatch/cve.hpp"
#include "vulnwatch/errors.hpp"
#include "vulnwatch/relevance.hpp"
#include "vulnwatch/scorer.hpp"

using namespace vulnwatch;
using testsupport::TempFile;

namespace {

Tweet make_tweet(std::string id, std::string text) {
  Tweet t;
  t.id = std::move(id);
  t.created_at = 1577836800;
  t.text = std::move(text);
  t.lang = "en";
  return t;
}

std::vector<Tweet> cyber_corpus() {
  return {
      make_tweet("1", "New vulnerability CVE-2020-0688 in Exchange, patch now"),
      make_tweet("2", "Exploit for CVE-2020-0688 remote code execution"),
      make_tweet("3", "I love sunny days at the beach"),
      make_tweet("4", "Security patch for CVE-2020-0601 released"),
      make_tweet("5", "My cat knocked over a plant"),
      make_tweet("6", "Critical security hole fixed on patch tuesday"),
  };
}

/// In-process wire-protocol server with a scriptable handler.
class ScorerServer {
 public:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  explicit ScorerServer(Handler handler) : handler_(std::move(handler)) {
    server_.Post("/score", [this](const httplib::Request& req, httplib::Response& res) {
      ++hits_;
      handler_(req, res);
    });
    server_.Post("/score_batch",
                 [this](const httplib::Request& req, httplib::Response& res) {
                   ++hits_;
                   handler_(req, res);
                 });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~ScorerServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int hits() const { return hits_; }

 private:
  httplib::Server server_;
  Handler handler_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
};

void respond_keyword(const httplib::Request& req, httplib::Response& res) {
  const auto body = nlohmann::json::parse(req.body);
  MockScorer mock;
  if (req.path == "/score") {
    nlohmann::json out;
    out["entailment"] = mock.score(body.at("premise"), body.at("hypothesis"));
    res.set_content(out.dump(), "application/json");
  } else {
    std::vector<double> scores;
    for (const auto& p : body.at("premises"))
      scores.push_back(mock.score(p.get<std::string>(), body.at("hypothesis")));
    nlohmann::json out;
    out["entailments"] = scores;
    res.set_content(out.dump(), "application/json");
  }
}

}  // namespace

TEST_CASE("mock scorer keyword rule") {
  MockScorer mock;
  const std::string h = "This text is related to cyber security";
  CHECK(mock.score("a VULNERABILITY appeared", h) == 0.9);
  CHECK(mock.score("new cve dropped", h) == 0.9);
  CHECK(mock.score("exploit PoC", h) == 0.9);
  CHECK(mock.score("patch your stuff", h) == 0.9);
  CHECK(mock.score("malware campaign", h) == 0.9);
  CHECK(mock.score("security advisory", h) == 0.9);
  CHECK(mock.score("nice weather today", h) == 0.1);
  CHECK(mock.score("", h) == 0.1);
}

TEST_CASE("zero-shot with the mock classifies the fixture corpus") {
  const auto tweets = cyber_corpus();
  auto scorer = mock_scorer();
  const auto result = zero_shot_classify(tweets, *scorer);
  REQUIRE(result.verdicts.size() == 6);
  CHECK(result.failed == 0);
  const std::set<std::string> relevant_ids = {"1", "2", "4", "6"};
  for (const auto& v : result.verdicts) {
    CHECK(v.method == RelevanceMethod::Zeroshot);
    CHECK(v.relevant == (relevant_ids.count(v.tweet_id) > 0));
    REQUIRE(v.score.has_value());
    CHECK(*v.score == (v.relevant ? 0.9 : 0.1));
    CHECK_FALSE(v.cluster_id.has_value());
  }
}

TEST_CASE("raising the threshold never adds relevant tweets") {
  const auto tweets = cyber_corpus();
  auto scorer = mock_scorer();
  std::size_t previous = tweets.size() + 1;
  for (const double threshold : {0.05, 0.5, 0.95}) {
    HypothesisConfig config;
    config.threshold = threshold;
    const auto result = zero_shot_classify(tweets, *scorer, config);
    std::size_t relevant = 0;
    for (const auto& v : result.verdicts) relevant += v.relevant;
    CHECK(relevant <= previous);
    previous = relevant;
  }
}

TEST_CASE("zero-shot validates its options") {
  const auto tweets = cyber_corpus();
  auto scorer = mock_scorer();
  HypothesisConfig empty_hypothesis;
  empty_hypothesis.hypothesis_template = "";
  CHECK_THROWS_AS(zero_shot_classify(tweets, *scorer, empty_hypothesis),
                  std::invalid_argument);
  HypothesisConfig bad_threshold;
  bad_threshold.threshold = 1.0;
  CHECK_THROWS_AS(zero_shot_classify(tweets, *scorer, bad_threshold),
                  std::invalid_argument);
  ZeroShotOptions bad_budget;
  bad_budget.fail_policy.failure_budget = 0;
  CHECK_THROWS_AS(zero_shot_classify(tweets, *scorer, {}, bad_budget),
                  std::invalid_argument);
}

TEST_CASE("http scorer round trips against a wire-protocol server") {
  ScorerServer server(respond_keyword);
  HttpEntailmentScorer scorer(server.url());
  CHECK(scorer.score("patch the vulnerability", "h") == 0.9);
  CHECK(scorer.score("sunny day", "h") == 0.1);
  const auto batch = scorer.score_batch({"cve here", "plain text"}, "h");
  REQUIRE(batch.size() == 2);
  CHECK(batch[0] == 0.9);
  CHECK(batch[1] == 0.1);
}

TEST_CASE("http scorer sends the bearer token when configured") {
  std::string seen_auth = "unset";
  ScorerServer server([&seen_auth](const httplib::Request& req, httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    respond_keyword(req, res);
  });
  setenv("VULNWATCH_SCORER_TOKEN", "sesame", 1);
  HttpEntailmentScorer scorer(server.url());
  scorer.score("cve", "h");
  unsetenv("VULNWATCH_SCORER_TOKEN");
  CHECK(seen_auth == "Bearer sesame");
}

TEST_CASE("http scorer failures map to the error taxonomy") {
  SUBCASE("non-200 status") {
    ScorerServer server([](const httplib::Request&, httplib::Response& res) {
      res.status = 503;
    });
    HttpEntailmentScorer scorer(server.url());
    CHECK_THROWS_AS(scorer.score("x", "h"), ExternalServiceError);
  }
  SUBCASE("unparseable body") {
    ScorerServer server([](const httplib::Request&, httplib::Response& res) {
      res.set_content("not json", "text/plain");
    });
    HttpEntailmentScorer scorer(server.url());
    CHECK_THROWS_AS(scorer.score("x", "h"), ExternalServiceError);
  }
  SUBCASE("out-of-range probability") {
    ScorerServer server([](const httplib::Request&, httplib::Response& res) {
      res.set_content("{\"entailment\": 1.5}", "application/json");
    });
    HttpEntailmentScorer scorer(server.url());
    CHECK_THROWS_AS(scorer.score("x", "h"), ExternalServiceError);
  }
  SUBCASE("unreachable host") {
    HttpEntailmentScorer scorer("http://127.0.0.1:1");
    CHECK_THROWS_AS(scorer.score("x", "h"), ExternalServiceError);
  }
  SUBCASE("bad url scheme") {
    CHECK_THROWS_AS(HttpEntailmentScorer("ftp://nope"), ConfigError);
  }
  SUBCASE("endpoint this build cannot reach") {
    // https is a valid scorer_url, but scoring against it must fail through
    // the service-error taxonomy whether the client lacks TLS or the host is
    // simply down — never via a raw httplib exception.
    HttpEntailmentScorer scorer("https://127.0.0.1:1");
    CHECK_THROWS_AS(scorer.score("x", "h"), ExternalServiceError);
  }
}

TEST_CASE("transient scorer failures are retried and then succeed") {
  std::atomic<int> failures_left{2};
  ScorerServer server([&failures_left](const httplib::Request& req, httplib::Response& res) {
    if (failures_left.fetch_sub(1) > 0) {
      res.status = 500;
      return;
    }
    respond_keyword(req, res);
  });
  HttpEntailmentScorer scorer(server.url());
  const std::vector<Tweet> one = {make_tweet("1", "patch now")};
  ZeroShotOptions options;
  options.fail_policy.initial_backoff = std::chrono::milliseconds(1);
  const auto result = zero_shot_classify(one, scorer, {}, options);
  CHECK(result.failed == 0);
  CHECK(result.verdicts[0].relevant);
  CHECK(server.hits() == 3);  // two failures, one success
}

TEST_CASE("a persistent outage trips the failure budget") {
  ScorerServer server([](const httplib::Request&, httplib::Response& res) {
    res.status = 500;
  });
  HttpEntailmentScorer scorer(server.url());
  std::vector<Tweet> tweets;
  for (int i = 0; i < 5; ++i)
    tweets.push_back(make_tweet(std::to_string(i), "text " + std::to_string(i)));
  ZeroShotOptions options;
  options.fail_policy.max_retries = 1;
  options.fail_policy.initial_backoff = std::chrono::milliseconds(1);
  options.fail_policy.failure_budget = 3;
  CHECK_THROWS_AS(zero_shot_classify(tweets, scorer, {}, options),
                  ExternalServiceError);
}

TEST_CASE("failures under budget are counted, not fatal") {
  // Fail every request for the second premise only.
  ScorerServer server([](const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body);
    if (body.at("premise").get<std::string>().find("poison") != std::string::npos) {
      res.status = 500;
      return;
    }
    respond_keyword(req, res);
  });
  HttpEntailmentScorer scorer(server.url());
  const std::vector<Tweet> tweets = {
      make_tweet("1", "patch now"),
      make_tweet("2", "poison pill"),
      make_tweet("3", "malware report"),
  };
  ZeroShotOptions options;
  options.fail_policy.max_retries = 1;
  options.fail_policy.initial_backoff = std::chrono::milliseconds(1);
  options.fail_policy.failure_budget = 5;
  const auto result = zero_shot_classify(tweets, scorer, {}, options);
  CHECK(result.failed == 1);
  REQUIRE(result.verdicts.size() == 3);
  CHECK(result.verdicts[0].relevant);
  CHECK_FALSE(result.verdicts[1].relevant);  // failed tweets are not relevant
  CHECK_FALSE(result.verdicts[1].score.has_value());
  CHECK(result.verdicts[2].relevant);
}

TEST_CASE("an out-of-range score from a custom scorer is rejected outright") {
  struct BadScorer : EntailmentScorer {
    double score(const std::string&, const std::string&) override { return 2.0; }
  } bad;
  const std::vector<Tweet> one = {make_tweet("1", "x")};
  CHECK_THROWS_AS(zero_shot_classify(one, bad), std::invalid_argument);
}

TEST_CASE("cluster relevance marks exactly the CVE clusters") {
  const auto tweets = cyber_corpus();
  const auto verdicts = cluster_relevance(tweets, 2, 7);
  REQUIRE(verdicts.size() == tweets.size());

  // Oracle: recompute the rule from the emitted cluster ids.
  std::set<std::uint32_t> cve_clusters;
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    REQUIRE(verdicts[i].cluster_id.has_value());
    if (!extract_cves(tweets[i].text).empty())
      cve_clusters.insert(*verdicts[i].cluster_id);
  }
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    const bool expected = cve_clusters.count(*verdicts[i].cluster_id) > 0;
    CHECK(verdicts[i].relevant == expected);
    CHECK(verdicts[i].method == RelevanceMethod::Kmeans);
    CHECK(*verdicts[i].score == (expected ? 1.0 : 0.0));
  }

  // Determinism across runs.
  const auto again = cluster_relevance(tweets, 2, 7);
  CHECK(verdicts == again);

  CHECK_THROWS_AS(cluster_relevance({}, 2, 7), std::invalid_argument);
  CHECK_THROWS_AS(cluster_relevance(tweets, 0, 7), std::invalid_argument);
  CHECK_THROWS_AS(cluster_relevance(tweets, 7, 7), std::invalid_argument);
}

TEST_CASE("filter_relevant keeps order and computes retention") {
  const auto tweets = cyber_corpus();
  auto scorer = mock_scorer();
  const auto result = zero_shot_classify(tweets, *scorer);
  const auto filtered = filter_relevant(result.verdicts, tweets);
  REQUIRE(filtered.relevant.size() == 4);
  CHECK(filtered.relevant[0].id == "1");
  CHECK(filtered.relevant[3].id == "6");
  CHECK(filtered.retention == doctest::Approx(4.0 / 6.0));

  CHECK_THROWS_AS(filter_relevant({}, {}), std::invalid_argument);
  auto mismatched = result.verdicts;
  mismatched[0].tweet_id = "other";
  CHECK_THROWS_AS(filter_relevant(mismatched, tweets), std::invalid_argument);
  mismatched.pop_back();
  CHECK_THROWS_AS(filter_relevant(mismatched, tweets), std::invalid_argument);
}

TEST_CASE("verdicts survive a save and load round trip") {
  const auto tweets = cyber_corpus();
  const auto kmeans_verdicts = cluster_relevance(tweets, 2, 7);
  auto scorer = mock_scorer();
  const auto zs = zero_shot_classify(tweets, *scorer);

  for (const auto& verdicts : {kmeans_verdicts, zs.verdicts}) {
    TempFile f("verdicts");
    save_verdicts(verdicts, f.path);
    CHECK(load_verdicts(f.path) == verdicts);
  }
}

TEST_CASE("load_verdicts rejects corrupt lines with their line number") {
  TempFile f("verdicts-bad",
             "{\"tweet_id\":\"1\",\"method\":\"zeroshot\",\"relevant\":true,\"score\":0.9}\n"
             "{\"tweet_id\":\"2\",\"method\":\"bogus\",\"relevant\":false}\n");
  try {
    load_verdicts(f.path);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  TempFile g("verdicts-bad2",
             "{\"tweet_id\":\"1\",\"method\":\"zeroshot\",\"relevant\":true,\"score\":1.5}\n");
  CHECK_THROWS_AS(load_verdicts(g.path), DataError);
  CHECK_THROWS_AS(load_verdicts("no-such-verdicts.jsonl"), DataError);
}

TEST_CASE("concurrent zero-shot preserves verdict order") {
  ScorerServer server(respond_keyword);
  HttpEntailmentScorer scorer(server.url());
  std::vector<Tweet> tweets;
  for (int i = 0; i < 40; ++i)
    tweets.push_back(make_tweet(std::to_string(i),
                                i % 3 ? "routine chatter" : "cve exploit news"));
  ZeroShotOptions options;
  options.in_flight = 8;
  const auto result = zero_shot_classify(tweets, scorer, {}, options);
  REQUIRE(result.verdicts.size() == tweets.size());
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    CHECK(result.verdicts[i].tweet_id == tweets[i].id);
    CHECK(result.verdicts[i].relevant == (i % 3 == 0));
  }
}
