#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vulnwatch/tokenize.hpp"

namespace vulnwatch {

/// Term <-> dense index bijection with document frequencies. Indices follow
/// lexicographic term order.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> doc_freq,
             std::size_t n_docs, std::uint32_t min_df);

  std::optional<std::uint32_t> find(std::string_view term) const;
  const std::string& term(std::uint32_t index) const { return terms_[index]; }
  std::uint32_t doc_freq(std::uint32_t index) const { return doc_freq_[index]; }
  std::size_t size() const { return terms_.size(); }
  std::size_t n_docs() const { return n_docs_; }
  std::uint32_t min_df() const { return min_df_; }
  const std::vector<std::string>& terms() const { return terms_; }

 private:
  std::vector<std::string> terms_;
  std::vector<std::uint32_t> doc_freq_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::size_t n_docs_ = 0;
  std::uint32_t min_df_ = 1;
};

/// Sparse TF-IDF document vector; entries sorted by index, weights > 0,
/// L2-normalized unless empty.
struct TermWeightVector {
  std::string doc_id;
  std::vector<std::pair<std::uint32_t, double>> entries;

  double norm() const;
};

/// Terms with document frequency >= min_df, indexed lexicographically.
Vocabulary fit_vocabulary(std::span<const TokenizedDoc> docs, std::uint32_t min_df = 1);

/// Smoothed inverse document frequency: ln((1 + N) / (1 + df)) + 1.
double smoothed_idf(std::size_t n_docs, std::uint32_t doc_freq);

/// weight(term) = raw count * idf, then L2-normalized. Out-of-vocabulary
/// terms are ignored; a doc with no in-vocabulary terms gives an empty vector.
TermWeightVector tfidf_vectorize(const TokenizedDoc& doc, const Vocabulary& vocab);

std::vector<TermWeightVector> tfidf_vectorize_all(std::span<const TokenizedDoc> docs,
                                                  const Vocabulary& vocab);

/// Text serialization: header "n_docs=<int>", then one "term\tdoc_freq" line
/// per term in index order.
void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary load_vocabulary(const std::filesystem::path& path);

}  // namespace vulnwatch
