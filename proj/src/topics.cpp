#include "vulnwatch/topics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "vulnwatch/stopwords.hpp"
#include "vulnwatch/tokenize.hpp"

namespace vulnwatch {

TweetEmbedding embed_tweet(const EmbeddingModel& model, const TokenizedDoc& doc) {
  TweetEmbedding out;
  out.tweet_id = doc.doc_id;
  out.vector.assign(model.hyperparams.dim, 0.0);

  std::size_t in_vocab = 0;
  for (const auto& tok : doc.tokens) {
    const auto idx = model.find(tok);
    if (!idx) continue;
    ++in_vocab;
    const auto& row = model.input_vectors[*idx];
    for (std::size_t d = 0; d < out.vector.size(); ++d) out.vector[d] += row[d];
  }
  if (in_vocab == 0) {
    out.all_oov = true;
    return out;
  }
  for (auto& v : out.vector) v /= static_cast<double>(in_vocab);
  return out;
}

namespace {

/// Highest-count terms, ties lexicographic. counts keyed by term.
std::vector<std::string> top_terms(const std::map<std::string, std::uint64_t>& counts,
                                   std::uint32_t n) {
  std::vector<std::pair<std::string, std::uint64_t>> rows(counts.begin(), counts.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> out;
  for (const auto& [term, count] : rows) {
    if (out.size() == n) break;
    out.push_back(term);
  }
  return out;
}

std::size_t count_distinct(const std::vector<std::vector<double>>& points) {
  std::set<std::vector<double>> unique(points.begin(), points.end());
  return unique.size();
}

}  // namespace

TopicMiningResult mine_topics(std::span<const Tweet> tweets, const EmbeddingModel& model,
                              const TopicMiningOptions& options) {
  if (options.n_keywords == 0)
    throw std::invalid_argument("mine_topics: n_keywords must be >= 1");
  if (options.k && *options.k == 0)
    throw std::invalid_argument("mine_topics: k must be >= 1");

  TopicMiningResult result;

  std::vector<TokenizedDoc> docs;
  std::vector<std::vector<double>> points;
  std::unordered_set<std::string> seen_texts;
  for (const auto& tweet : tweets) {
    if (options.unique_texts && !seen_texts.insert(tweet.text).second) {
      ++result.dropped_duplicates;
      continue;
    }
    auto doc = tokenize_tweet(tweet);
    auto embedding = embed_tweet(model, doc);
    if (embedding.all_oov) {
      ++result.dropped_all_oov;
      continue;
    }
    result.clustered_ids.push_back(tweet.id);
    docs.push_back(std::move(doc));
    points.push_back(std::move(embedding.vector));
  }
  result.clustered_tweets = points.size();

  std::uint32_t k = 0;
  if (options.k) {
    k = *options.k;
    if (points.size() < k)
      throw std::invalid_argument("mine_topics: fewer embeddable tweets (" +
                                  std::to_string(points.size()) + ") than k (" +
                                  std::to_string(k) + ")");
  } else {
    const std::size_t distinct = count_distinct(points);
    std::vector<std::uint32_t> feasible;
    for (const auto candidate : options.k_scan)
      if (candidate >= 1 && candidate <= distinct) feasible.push_back(candidate);
    std::sort(feasible.begin(), feasible.end());
    feasible.erase(std::unique(feasible.begin(), feasible.end()), feasible.end());
    if (feasible.size() < 3)
      throw std::invalid_argument(
          "mine_topics: auto k needs at least 3 feasible scan values");
    result.scan = sse_curve(points, feasible, options.seed);
    k = elbow_select(result.scan);
  }

  const auto fit = kmeans_fit(points, k, options.seed);
  result.k = k;
  result.assignments = fit.assignments;

  std::vector<std::map<std::string, std::uint64_t>> term_counts(k);
  std::vector<std::uint64_t> member_counts(k, 0);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto c = fit.assignments[i];
    ++member_counts[c];
    for (const auto& tok : docs[i].tokens)
      if (!is_stopword(tok)) ++term_counts[c][tok];
  }

  result.clusters.reserve(k);
  for (std::uint32_t c = 0; c < k; ++c) {
    TopicCluster cluster;
    cluster.id = c;
    cluster.tweet_count = member_counts[c];
    cluster.keywords = top_terms(term_counts[c], options.n_keywords);
    result.clusters.push_back(std::move(cluster));
  }
  return result;
}

std::vector<TopicCluster> mine_word_topics(const EmbeddingModel& model, std::uint32_t k,
                                           std::uint64_t seed,
                                           std::uint32_t n_keywords) {
  if (k == 0 || k > model.size())
    throw std::invalid_argument("mine_word_topics: k must lie in [1, vocabulary size]");
  if (n_keywords == 0)
    throw std::invalid_argument("mine_word_topics: n_keywords must be >= 1");

  const auto fit = kmeans_fit(model.input_vectors, k, seed);

  std::vector<std::map<std::string, std::uint64_t>> term_counts(k);
  std::vector<std::uint64_t> member_counts(k, 0);
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto c = fit.assignments[i];
    ++member_counts[c];
    term_counts[c][model.terms[i]] = model.frequency[i];
  }

  std::vector<TopicCluster> clusters;
  clusters.reserve(k);
  for (std::uint32_t c = 0; c < k; ++c) {
    TopicCluster cluster;
    cluster.id = c;
    cluster.tweet_count = member_counts[c];
    cluster.keywords = top_terms(term_counts[c], n_keywords);
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

}  // namespace vulnwatch
