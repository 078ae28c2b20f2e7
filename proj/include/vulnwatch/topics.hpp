#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vulnwatch/corpus.hpp"
#include "vulnwatch/kmeans.hpp"
#include "vulnwatch/word2vec.hpp"

namespace vulnwatch {

struct TopicCluster {
  std::uint32_t id = 0;
  std::uint64_t tweet_count = 0;
  std::vector<std::string> keywords;  // frequency order; shorter than requested
                                      // only when the cluster lacks distinct terms

  bool operator==(const TopicCluster&) const = default;
};

struct TweetEmbedding {
  std::string tweet_id;
  std::vector<double> vector;
  bool all_oov = false;
};

/// Mean of the input vectors of in-vocabulary tokens; a doc with none gets a
/// zero vector and the all_oov flag.
TweetEmbedding embed_tweet(const EmbeddingModel& model, const TokenizedDoc& doc);

struct TopicMiningOptions {
  std::optional<std::uint32_t> k = 10;          // nullopt: elbow over k_scan
  std::vector<std::uint32_t> k_scan = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  std::uint64_t seed = 0;
  bool unique_texts = false;  // drop exact-duplicate texts before clustering
  std::uint32_t n_keywords = 3;
};

struct TopicMiningResult {
  std::vector<TopicCluster> clusters;
  std::uint32_t k = 0;
  std::size_t clustered_tweets = 0;
  std::size_t dropped_all_oov = 0;
  std::size_t dropped_duplicates = 0;
  std::vector<std::pair<std::uint32_t, double>> scan;  // (k, sse), auto mode only
  std::vector<std::string> clustered_ids;              // aligned with assignments
  std::vector<std::uint32_t> assignments;
};

/// Embeds every tweet (shared tokenizer defaults), drops all-OOV ones, fits
/// k-means on the mean vectors, then picks each cluster's keywords as its
/// n_keywords highest-frequency non-stopword tokens (ties lexicographic).
/// Throws std::invalid_argument when fewer embeddable tweets than k, or when
/// auto selection is left with fewer than 3 feasible scan points.
TopicMiningResult mine_topics(std::span<const Tweet> tweets, const EmbeddingModel& model,
                              const TopicMiningOptions& options = {});

/// Clusters the vocabulary's input vectors instead of tweets; tweet_count then
/// holds the member-term count and keywords are the cluster's highest-corpus-
/// frequency terms. No Table-style tweet totals apply.
std::vector<TopicCluster> mine_word_topics(const EmbeddingModel& model, std::uint32_t k,
                                           std::uint64_t seed,
                                           std::uint32_t n_keywords = 3);

}  // namespace vulnwatch
