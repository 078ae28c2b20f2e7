#include "vulnwatch/word2vec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

#include "vulnwatch/errors.hpp"

namespace vulnwatch {

namespace {

// Platform-stable uniform in [0, 1): 53 mantissa bits straight from the engine.
double next_u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double sigmoid(double x) {
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// ln(1 + e^x) without overflow; -ln sigmoid(z) == softplus(-z).
double softplus(double x) {
  if (x > 30.0) return x;
  return std::log1p(std::exp(x));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_pair_shapes(std::span<const double> center, std::span<const double> context,
                       std::span<const std::vector<double>> negatives) {
  if (center.empty() || center.size() != context.size())
    throw std::invalid_argument("sgns: center/context dimension mismatch");
  for (const auto& n : negatives)
    if (n.size() != center.size())
      throw std::invalid_argument("sgns: negative sample dimension mismatch");
}

void validate_hyperparams(const EmbeddingHyperparams& hp) {
  if (hp.dim < 2) throw std::invalid_argument("word2vec: dim must be >= 2");
  if (hp.window == 0) throw std::invalid_argument("word2vec: window must be >= 1");
  if (hp.negative_samples == 0)
    throw std::invalid_argument("word2vec: negative_samples must be >= 1");
  if (hp.epochs == 0) throw std::invalid_argument("word2vec: epochs must be >= 1");
  if (hp.min_count == 0) throw std::invalid_argument("word2vec: min_count must be >= 1");
  if (!(hp.learning_rate > 0.0) || !(hp.min_learning_rate > 0.0) ||
      hp.min_learning_rate > hp.learning_rate)
    throw std::invalid_argument(
        "word2vec: need 0 < min_learning_rate <= learning_rate");
}

void check_finite(const EmbeddingModel& model, std::uint32_t epoch) {
  for (const auto* mat : {&model.input_vectors, &model.output_vectors})
    for (const auto& row : *mat)
      for (double v : row)
        if (!std::isfinite(v))
          throw std::runtime_error("word2vec: non-finite vector entry after epoch " +
                                   std::to_string(epoch + 1));
}

}  // namespace

std::optional<std::uint32_t> EmbeddingModel::find(std::string_view term) const {
  const auto it = index.find(std::string(term));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

double sgns_loss(std::span<const double> center, std::span<const double> context,
                 std::span<const std::vector<double>> negatives) {
  check_pair_shapes(center, context, negatives);
  double loss = softplus(-dot(center, context));
  for (const auto& neg : negatives) loss += softplus(dot(center, neg));
  return loss;
}

SgnsGradients sgns_gradients(std::span<const double> center,
                             std::span<const double> context,
                             std::span<const std::vector<double>> negatives) {
  check_pair_shapes(center, context, negatives);
  const std::size_t dim = center.size();

  SgnsGradients g;
  g.d_center.assign(dim, 0.0);
  g.d_context.assign(dim, 0.0);
  g.d_negatives.assign(negatives.size(), std::vector<double>(dim, 0.0));

  const double s_pos = sigmoid(dot(center, context));
  for (std::size_t d = 0; d < dim; ++d) {
    g.d_context[d] = (s_pos - 1.0) * center[d];
    g.d_center[d] = (s_pos - 1.0) * context[d];
  }
  for (std::size_t k = 0; k < negatives.size(); ++k) {
    const double s_neg = sigmoid(dot(center, negatives[k]));
    for (std::size_t d = 0; d < dim; ++d) {
      g.d_negatives[k][d] = s_neg * center[d];
      g.d_center[d] += s_neg * negatives[k][d];
    }
  }
  return g;
}

EmbeddingModel train_word2vec(std::span<const TokenizedDoc> docs,
                              const EmbeddingHyperparams& hp) {
  validate_hyperparams(hp);

  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& doc : docs)
    for (const auto& tok : doc.tokens) ++counts[tok];

  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (const auto& [term, count] : counts)
    if (count >= hp.min_count) kept.emplace_back(term, count);
  if (kept.empty())
    throw std::invalid_argument("word2vec: vocabulary empty after min_count pruning");
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  EmbeddingModel model;
  model.hyperparams = hp;
  model.terms.reserve(kept.size());
  model.frequency.reserve(kept.size());
  for (std::uint32_t i = 0; i < kept.size(); ++i) {
    model.terms.push_back(kept[i].first);
    model.frequency.push_back(kept[i].second);
    model.index.emplace(kept[i].first, i);
  }
  const std::size_t vocab = model.terms.size();
  const std::size_t dim = hp.dim;

  std::vector<std::vector<std::uint32_t>> sequences;
  std::uint64_t total_tokens = 0;
  for (const auto& doc : docs) {
    std::vector<std::uint32_t> seq;
    seq.reserve(doc.tokens.size());
    for (const auto& tok : doc.tokens)
      if (const auto idx = model.find(tok)) seq.push_back(*idx);
    if (seq.empty()) continue;
    total_tokens += seq.size();
    sequences.push_back(std::move(seq));
  }

  std::mt19937_64 rng(hp.seed);
  model.input_vectors.assign(vocab, std::vector<double>(dim));
  for (auto& row : model.input_vectors)
    for (auto& v : row) v = (next_u01(rng) - 0.5) / static_cast<double>(dim);
  model.output_vectors.assign(vocab, std::vector<double>(dim, 0.0));

  // Cumulative unigram^0.75 table; negatives drawn by inverse CDF.
  std::vector<double> cumulative(vocab);
  double running = 0.0;
  for (std::size_t i = 0; i < vocab; ++i) {
    running += std::pow(static_cast<double>(model.frequency[i]), 0.75);
    cumulative[i] = running;
  }
  auto draw_negative = [&]() -> std::uint32_t {
    const double r = next_u01(rng) * running;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    const auto idx = static_cast<std::size_t>(it - cumulative.begin());
    return static_cast<std::uint32_t>(std::min(idx, vocab - 1));
  };

  const double decay_span =
      static_cast<double>(hp.epochs) * static_cast<double>(total_tokens) + 1.0;
  std::uint64_t processed = 0;
  std::vector<std::uint32_t> negative_ids;
  std::vector<std::vector<double>> negative_vecs;

  for (std::uint32_t epoch = 0; epoch < hp.epochs; ++epoch) {
    for (const auto& seq : sequences) {
      const auto len = static_cast<std::int64_t>(seq.size());
      for (std::int64_t pos = 0; pos < len; ++pos) {
        const double alpha =
            std::max(hp.min_learning_rate,
                     hp.learning_rate *
                         (1.0 - static_cast<double>(processed) / decay_span));
        ++processed;
        const std::uint32_t center = seq[pos];
        const auto w = static_cast<std::int64_t>(hp.window);
        for (std::int64_t off = -w; off <= w; ++off) {
          if (off == 0) continue;
          const std::int64_t ctx_pos = pos + off;
          if (ctx_pos < 0 || ctx_pos >= len) continue;
          const std::uint32_t context = seq[ctx_pos];

          negative_ids.clear();
          negative_vecs.clear();
          for (std::uint32_t k = 0; k < hp.negative_samples; ++k) {
            const std::uint32_t target = draw_negative();
            if (target == context) continue;
            negative_ids.push_back(target);
            negative_vecs.push_back(model.output_vectors[target]);
          }

          const auto grads = sgns_gradients(model.input_vectors[center],
                                            model.output_vectors[context],
                                            negative_vecs);
          auto& v = model.input_vectors[center];
          auto& u = model.output_vectors[context];
          for (std::size_t d = 0; d < dim; ++d) {
            v[d] -= alpha * grads.d_center[d];
            u[d] -= alpha * grads.d_context[d];
          }
          for (std::size_t k = 0; k < negative_ids.size(); ++k) {
            auto& neg = model.output_vectors[negative_ids[k]];
            for (std::size_t d = 0; d < dim; ++d)
              neg[d] -= alpha * grads.d_negatives[k][d];
          }
        }
      }
    }
    check_finite(model, epoch);
  }
  return model;
}

double cosine_similarity(const EmbeddingModel& model, std::string_view a,
                         std::string_view b) {
  const auto ia = model.find(a);
  const auto ib = model.find(b);
  if (!ia || !ib)
    throw std::invalid_argument("cosine_similarity: term not in vocabulary");
  const auto& va = model.input_vectors[*ia];
  const auto& vb = model.input_vectors[*ib];
  const double na = std::sqrt(dot(va, va));
  const double nb = std::sqrt(dot(vb, vb));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(va, vb) / (na * nb);
}

void save_embeddings(const EmbeddingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << "dim=" << model.hyperparams.dim << " vocab=" << model.size() << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < model.size(); ++i) {
    out << model.terms[i];
    for (double v : model.input_vectors[i]) out << ' ' << v;
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

EmbeddingModel load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path.string());

  std::string header;
  if (!std::getline(in, header)) throw DataError("embedding file empty: " + path.string());
  if (!header.empty() && header.back() == '\r') header.pop_back();
  unsigned dim = 0;
  unsigned long long vocab = 0;
  if (std::sscanf(header.c_str(), "dim=%u vocab=%llu", &dim, &vocab) != 2 || dim < 2)
    throw DataError("bad embedding header: " + header);

  EmbeddingModel model;
  model.hyperparams.dim = dim;

  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string term;
    fields >> term;
    std::vector<double> row(dim);
    for (unsigned d = 0; d < dim; ++d)
      if (!(fields >> row[d]) || !std::isfinite(row[d]))
        throw DataError("embedding line " + std::to_string(line_no) +
                        ": expected " + std::to_string(dim) + " finite values");
    double extra;
    if (fields >> extra)
      throw DataError("embedding line " + std::to_string(line_no) + ": trailing values");
    if (!model.index.emplace(term, static_cast<std::uint32_t>(model.terms.size())).second)
      throw DataError("embedding line " + std::to_string(line_no) +
                      ": duplicate term " + term);
    model.terms.push_back(term);
    model.frequency.push_back(0);
    model.input_vectors.push_back(std::move(row));
  }
  if (model.size() != vocab)
    throw DataError("embedding file declares vocab=" + std::to_string(vocab) +
                    " but has " + std::to_string(model.size()) + " rows");
  return model;
}

}  // namespace vulnwatch
