#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vulnwatch/tokenize.hpp"

namespace vulnwatch {

struct EmbeddingHyperparams {
  std::uint32_t dim = 100;
  std::uint32_t window = 5;
  std::uint32_t negative_samples = 5;
  std::uint32_t epochs = 5;
  double learning_rate = 0.025;     // linearly decayed per processed token
  double min_learning_rate = 1e-4;  // decay floor
  std::uint32_t min_count = 5;
  std::uint64_t seed = 0;
};

/// Skip-gram word vectors. Term indices run by descending corpus frequency,
/// ties lexicographic. Models loaded from disk carry input vectors only
/// (empty output_vectors and zero frequencies): they embed and compare terms
/// but cannot resume training.
struct EmbeddingModel {
  std::vector<std::string> terms;
  std::unordered_map<std::string, std::uint32_t> index;
  std::vector<std::uint64_t> frequency;
  std::vector<std::vector<double>> input_vectors;   // |V| x dim
  std::vector<std::vector<double>> output_vectors;  // |V| x dim
  EmbeddingHyperparams hyperparams;

  std::optional<std::uint32_t> find(std::string_view term) const;
  std::size_t size() const { return terms.size(); }
};

/// Loss for one skip-gram pair with negative samples:
///   L = -ln sigmoid(v . u_pos) - sum_k ln sigmoid(-(v . u_k))
/// where v is the center's input vector, u_pos the context's output vector
/// and u_k the negatives' output vectors.
double sgns_loss(std::span<const double> center, std::span<const double> context,
                 std::span<const std::vector<double>> negatives);

struct SgnsGradients {
  std::vector<double> d_center;
  std::vector<double> d_context;
  std::vector<std::vector<double>> d_negatives;
};

/// Analytic gradients of sgns_loss with respect to every participating vector.
SgnsGradients sgns_gradients(std::span<const double> center,
                             std::span<const double> context,
                             std::span<const std::vector<double>> negatives);

/// Single-threaded skip-gram training with negative sampling. Deterministic:
/// all randomness (vector init, negative draws) comes from hp.seed. Negatives
/// are drawn from the unigram distribution raised to 0.75. Throws
/// std::invalid_argument on bad hyperparameters or when no term survives
/// min_count pruning; std::runtime_error if a vector turns non-finite.
EmbeddingModel train_word2vec(std::span<const TokenizedDoc> docs,
                              const EmbeddingHyperparams& hp = {});

/// Cosine of the input vectors of two in-vocabulary terms (0.0 when either
/// vector is all-zero). Throws std::invalid_argument on unknown terms.
double cosine_similarity(const EmbeddingModel& model, std::string_view a,
                         std::string_view b);

/// Text serialization: header "dim=<int> vocab=<int>", then one line per term
/// "term v_1 ... v_dim" (input vectors only), in index order.
void save_embeddings(const EmbeddingModel& model, const std::filesystem::path& path);
EmbeddingModel load_embeddings(const std::filesystem::path& path);

}  // namespace vulnwatch
