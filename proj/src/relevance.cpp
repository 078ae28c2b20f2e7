#include "vulnwatch/relevance.hpp"

#include <atomic>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>

#include "json.hpp"
#include "vulnwatch/cve.hpp"
#include "vulnwatch/errors.hpp"
#include "vulnwatch/kmeans.hpp"
#include "vulnwatch/tfidf.hpp"
#include "vulnwatch/tokenize.hpp"

namespace vulnwatch {

std::string to_string(RelevanceMethod method) {
  return method == RelevanceMethod::Kmeans ? "kmeans" : "zeroshot";
}

RelevanceMethod relevance_method_from_string(std::string_view name) {
  if (name == "kmeans") return RelevanceMethod::Kmeans;
  if (name == "zeroshot") return RelevanceMethod::Zeroshot;
  throw DataError("unknown relevance method: " + std::string(name));
}

std::vector<RelevanceVerdict> cluster_relevance(std::span<const Tweet> tweets,
                                                std::uint32_t k, std::uint64_t seed) {
  if (tweets.empty()) throw std::invalid_argument("cluster_relevance: empty corpus");
  if (k == 0 || k > tweets.size())
    throw std::invalid_argument("cluster_relevance: k must lie in [1, corpus size]");

  const auto docs = tokenize_tweets(tweets);
  const auto vocab = fit_vocabulary(docs, 1);
  const auto vectors = tfidf_vectorize_all(docs, vocab);
  std::vector<SparsePoint> points;
  points.reserve(vectors.size());
  for (const auto& v : vectors) points.push_back(v.entries);
  const auto model = kmeans_fit_sparse(points, vocab.size(), k, seed);

  std::vector<char> cluster_has_cve(model.k, 0);
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    const auto c = model.assignments[i];
    if (!cluster_has_cve[c] && !extract_cves(tweets[i].text).empty())
      cluster_has_cve[c] = 1;
  }

  std::vector<RelevanceVerdict> verdicts;
  verdicts.reserve(tweets.size());
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    RelevanceVerdict v;
    v.tweet_id = tweets[i].id;
    v.method = RelevanceMethod::Kmeans;
    v.cluster_id = model.assignments[i];
    v.relevant = cluster_has_cve[model.assignments[i]] != 0;
    v.score = v.relevant ? 1.0 : 0.0;
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

namespace {

/// One attempt plus max_retries more, doubling the backoff between attempts.
/// std::nullopt once the schedule is exhausted.
std::optional<double> score_with_retries(EntailmentScorer& scorer, const std::string& text,
                                         const HypothesisConfig& config,
                                         const FailPolicy& policy) {
  auto backoff = policy.initial_backoff;
  for (std::uint32_t attempt = 0; attempt <= policy.max_retries; ++attempt) {
    if (attempt > 0) {
      if (backoff.count() > 0) std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    double s = 0.0;
    try {
      s = scorer.score(text, config.hypothesis_template);
    } catch (const ExternalServiceError&) {
      continue;
    }
    if (!(s >= 0.0 && s <= 1.0))
      throw std::invalid_argument("scorer produced a probability outside [0,1]");
    return s;
  }
  return std::nullopt;
}

}  // namespace

ZeroShotResult zero_shot_classify(std::span<const Tweet> tweets, EntailmentScorer& scorer,
                                  const HypothesisConfig& config,
                                  const ZeroShotOptions& options) {
  if (config.hypothesis_template.empty())
    throw std::invalid_argument("hypothesis template must be non-empty");
  if (!(config.threshold > 0.0 && config.threshold < 1.0))
    throw std::invalid_argument("threshold must lie strictly between 0 and 1");
  if (options.in_flight == 0) throw std::invalid_argument("in_flight must be >= 1");
  if (options.fail_policy.failure_budget == 0)
    throw std::invalid_argument("failure_budget must be >= 1");

  ZeroShotResult result;
  result.verdicts.resize(tweets.size());

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> failed{0};
  std::atomic<std::uint32_t> consecutive{0};
  std::atomic<bool> done{false};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&] {
    while (!done.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tweets.size()) return;
      try {
        const auto s =
            score_with_retries(scorer, tweets[i].text, config, options.fail_policy);
        RelevanceVerdict v;
        v.tweet_id = tweets[i].id;
        v.method = RelevanceMethod::Zeroshot;
        if (s) {
          v.score = *s;
          v.relevant = *s >= config.threshold;
          consecutive.store(0);
        } else {
          failed.fetch_add(1);
          const auto run = consecutive.fetch_add(1) + 1;
          if (run >= options.fail_policy.failure_budget)
            throw ExternalServiceError("scorer unreachable: " + std::to_string(run) +
                                       " tweets failed in a row");
        }
        result.verdicts[i] = std::move(v);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        done.store(true);
        return;
      }
    }
  };

  const std::size_t n_threads =
      std::min<std::size_t>(options.in_flight, tweets.empty() ? 1 : tweets.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  result.failed = failed.load();
  return result;
}

FilterResult filter_relevant(std::span<const RelevanceVerdict> verdicts,
                             std::span<const Tweet> tweets) {
  if (tweets.empty()) throw std::invalid_argument("filter_relevant: empty input");
  if (verdicts.size() != tweets.size())
    throw std::invalid_argument("filter_relevant: verdict/tweet count mismatch");
  for (std::size_t i = 0; i < tweets.size(); ++i)
    if (verdicts[i].tweet_id != tweets[i].id)
      throw std::invalid_argument("filter_relevant: id mismatch at index " +
                                  std::to_string(i));

  FilterResult out;
  for (std::size_t i = 0; i < tweets.size(); ++i)
    if (verdicts[i].relevant) out.relevant.push_back(tweets[i]);
  out.retention =
      static_cast<double>(out.relevant.size()) / static_cast<double>(tweets.size());
  return out;
}

void save_verdicts(std::span<const RelevanceVerdict> verdicts,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  for (const auto& v : verdicts) {
    nlohmann::json record;
    record["tweet_id"] = v.tweet_id;
    record["method"] = to_string(v.method);
    record["relevant"] = v.relevant;
    if (v.score) record["score"] = *v.score;
    if (v.cluster_id) record["cluster_id"] = *v.cluster_id;
    out << record.dump() << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<RelevanceVerdict> load_verdicts(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path.string());
  std::vector<RelevanceVerdict> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto record = nlohmann::json::parse(line, nullptr, false);
    const auto fail = [&](const std::string& why) {
      return DataError("verdict line " + std::to_string(line_no) + ": " + why);
    };
    if (record.is_discarded()) throw fail("invalid JSON");
    if (!record.contains("tweet_id") || !record["tweet_id"].is_string())
      throw fail("missing tweet_id");
    if (!record.contains("method") || !record["method"].is_string())
      throw fail("missing method");
    if (!record.contains("relevant") || !record["relevant"].is_boolean())
      throw fail("missing relevant");
    RelevanceVerdict v;
    v.tweet_id = record["tweet_id"].get<std::string>();
    try {
      v.method = relevance_method_from_string(record["method"].get<std::string>());
    } catch (const DataError& e) {
      throw fail(e.what());
    }
    v.relevant = record["relevant"].get<bool>();
    if (record.contains("score")) {
      if (!record["score"].is_number()) throw fail("score must be a number");
      const double s = record["score"].get<double>();
      if (!(s >= 0.0 && s <= 1.0)) throw fail("score outside [0,1]");
      v.score = s;
    }
    if (record.contains("cluster_id")) {
      if (!record["cluster_id"].is_number_unsigned())
        throw fail("cluster_id must be a non-negative integer");
      v.cluster_id = record["cluster_id"].get<std::uint32_t>();
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace vulnwatch
