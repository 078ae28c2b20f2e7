#include "vulnwatch/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "vulnwatch/errors.hpp"

namespace vulnwatch {

Vocabulary::Vocabulary(std::vector<std::string> terms,
                       std::vector<std::uint32_t> doc_freq, std::size_t n_docs,
                       std::uint32_t min_df)
    : terms_(std::move(terms)),
      doc_freq_(std::move(doc_freq)),
      n_docs_(n_docs),
      min_df_(min_df) {
  index_.reserve(terms_.size());
  for (std::uint32_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], i);
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double TermWeightVector::norm() const {
  double sum = 0.0;
  for (const auto& [_, w] : entries) sum += w * w;
  return std::sqrt(sum);
}

Vocabulary fit_vocabulary(std::span<const TokenizedDoc> docs, std::uint32_t min_df) {
  if (min_df < 1) throw std::invalid_argument("min_df must be >= 1");
  // std::map keeps terms lexicographically sorted for index assignment.
  std::map<std::string, std::uint32_t> df;
  std::vector<std::string_view> seen;
  for (const auto& doc : docs) {
    seen.clear();
    for (const auto& tok : doc.tokens) seen.push_back(tok);
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (auto tok : seen) ++df[std::string(tok)];
  }
  std::vector<std::string> terms;
  std::vector<std::uint32_t> freqs;
  for (auto& [term, freq] : df) {
    if (freq >= min_df) {
      terms.push_back(term);
      freqs.push_back(freq);
    }
  }
  return Vocabulary(std::move(terms), std::move(freqs), docs.size(), min_df);
}

double smoothed_idf(std::size_t n_docs, std::uint32_t doc_freq) {
  return std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + doc_freq)) + 1.0;
}

TermWeightVector tfidf_vectorize(const TokenizedDoc& doc, const Vocabulary& vocab) {
  std::map<std::uint32_t, double> counts;
  for (const auto& tok : doc.tokens)
    if (auto idx = vocab.find(tok)) counts[*idx] += 1.0;

  TermWeightVector vec;
  vec.doc_id = doc.doc_id;
  vec.entries.reserve(counts.size());
  double sq = 0.0;
  for (const auto& [idx, tf] : counts) {
    const double w = tf * smoothed_idf(vocab.n_docs(), vocab.doc_freq(idx));
    vec.entries.emplace_back(idx, w);
    sq += w * w;
  }
  if (sq > 0.0) {
    const double inv = 1.0 / std::sqrt(sq);
    for (auto& [_, w] : vec.entries) w *= inv;
  }
  return vec;
}

std::vector<TermWeightVector> tfidf_vectorize_all(std::span<const TokenizedDoc> docs,
                                                  const Vocabulary& vocab) {
  std::vector<TermWeightVector> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) out.push_back(tfidf_vectorize(doc, vocab));
  return out;
}

void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write vocabulary: " + path.string());
  out << "n_docs=" << vocab.n_docs() << '\n';
  for (std::uint32_t i = 0; i < vocab.size(); ++i)
    out << vocab.term(i) << '\t' << vocab.doc_freq(i) << '\n';
  if (!out.flush()) throw DataError("write failed: " + path.string());
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open vocabulary: " + path.string());
  std::string header;
  if (!std::getline(in, header) || header.rfind("n_docs=", 0) != 0)
    throw DataError("vocabulary file missing n_docs header: " + path.string());
  std::size_t n_docs = 0;
  try {
    n_docs = std::stoull(header.substr(7));
  } catch (const std::exception&) {
    throw DataError("bad n_docs header: " + path.string());
  }
  std::vector<std::string> terms;
  std::vector<std::uint32_t> freqs;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw DataError("bad vocabulary line " + std::to_string(line_no));
    terms.push_back(line.substr(0, tab));
    try {
      freqs.push_back(static_cast<std::uint32_t>(std::stoul(line.substr(tab + 1))));
    } catch (const std::exception&) {
      throw DataError("bad doc_freq on line " + std::to_string(line_no));
    }
  }
  // Re-sort defensively so indices stay lexicographic even for hand-edited files.
  std::vector<std::size_t> order(terms.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return terms[a] < terms[b]; });
  std::vector<std::string> sorted_terms;
  std::vector<std::uint32_t> sorted_freqs;
  for (auto i : order) {
    sorted_terms.push_back(std::move(terms[i]));
    sorted_freqs.push_back(freqs[i]);
  }
  const std::uint32_t min_df =
      sorted_freqs.empty() ? 1 : *std::min_element(sorted_freqs.begin(), sorted_freqs.end());
  return Vocabulary(std::move(sorted_terms), std::move(sorted_freqs), n_docs, min_df);
}

}  // namespace vulnwatch
