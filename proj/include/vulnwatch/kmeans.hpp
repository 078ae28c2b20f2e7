#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace vulnwatch {

/// Sparse vector entries, sorted by index, implicit zeros elsewhere.
using SparsePoint = std::vector<std::pair<std::uint32_t, double>>;

struct ClusterModel {
  std::uint32_t k = 0;
  std::size_t dim = 0;
  std::vector<std::vector<double>> centroids;  // k x dim
  std::vector<std::uint32_t> assignments;      // one per input point
  double sse = 0.0;
  std::uint64_t seed = 0;
  std::uint32_t iterations = 0;
  std::vector<double> sse_history;  // SSE after each assignment pass
};

struct KmeansOptions {
  std::uint32_t max_iter = 300;
  double tol = 1e-4;  // on maximum centroid displacement
};

/// Lloyd's algorithm with k-means++ initialization. All randomness comes
/// from the seed; identical inputs and seed give an identical model.
/// Assignment ties break toward the lowest cluster index; a cluster that
/// empties is re-seeded with the point farthest from its assigned centroid.
/// Requires 1 <= k <= number of distinct input vectors and a uniform
/// dimension (throws std::invalid_argument otherwise).
ClusterModel kmeans_fit(std::span<const std::vector<double>> points, std::uint32_t k,
                        std::uint64_t seed, const KmeansOptions& options = {});

/// Same contract over sparse points of the given dimension.
ClusterModel kmeans_fit_sparse(std::span<const SparsePoint> points, std::size_t dim,
                               std::uint32_t k, std::uint64_t seed,
                               const KmeansOptions& options = {});

/// One independent fit per requested k (shared seed); returns (k, sse) pairs.
/// k_values must be strictly ascending.
std::vector<std::pair<std::uint32_t, double>> sse_curve(
    std::span<const std::vector<double>> points, std::span<const std::uint32_t> k_values,
    std::uint64_t seed, const KmeansOptions& options = {});

std::vector<std::pair<std::uint32_t, double>> sse_curve_sparse(
    std::span<const SparsePoint> points, std::size_t dim,
    std::span<const std::uint32_t> k_values, std::uint64_t seed,
    const KmeansOptions& options = {});

/// Interior k maximizing the second difference of the SSE curve
/// (sse[i-1] - sse[i]) - (sse[i] - sse[i+1]); ties go to the smallest k.
/// Requires at least 3 curve points.
std::uint32_t elbow_select(std::span<const std::pair<std::uint32_t, double>> curve);

}  // namespace vulnwatch
