#include "vulnwatch/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

namespace vulnwatch {

namespace {

// Platform-stable uniform in [0, 1): 53 mantissa bits straight from the engine.
double next_u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Point {
  SparsePoint entries;
  double norm2 = 0.0;
};

double dot(const Point& p, const std::vector<double>& dense) {
  double s = 0.0;
  for (const auto& [i, v] : p.entries) s += v * dense[i];
  return s;
}

double dist2(const Point& p, const std::vector<double>& centroid, double centroid_norm2) {
  const double d = p.norm2 - 2.0 * dot(p, centroid) + centroid_norm2;
  return d > 0.0 ? d : 0.0;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

std::vector<double> densify(const SparsePoint& p, std::size_t dim) {
  std::vector<double> out(dim, 0.0);
  for (const auto& [i, v] : p) out[i] = v;
  return out;
}

std::size_t count_distinct(const std::vector<Point>& points) {
  std::set<SparsePoint> uniq;
  for (const auto& p : points) uniq.insert(p.entries);
  return uniq.size();
}

std::vector<std::vector<double>> kmeanspp_init(const std::vector<Point>& points,
                                               std::size_t dim, std::uint32_t k,
                                               std::mt19937_64& rng) {
  const std::size_t n = points.size();
  std::vector<std::vector<double>> centroids;
  centroids.reserve(k);

  std::size_t first = static_cast<std::size_t>(next_u01(rng) * static_cast<double>(n));
  if (first >= n) first = n - 1;
  centroids.push_back(densify(points[first].entries, dim));

  std::vector<double> d2(n);
  double cn = norm2(centroids[0]);
  for (std::size_t i = 0; i < n; ++i) d2[i] = dist2(points[i], centroids[0], cn);

  for (std::uint32_t j = 1; j < k; ++j) {
    double total = 0.0;
    for (double d : d2) total += d;
    // total > 0 is guaranteed while j < number of distinct points.
    const double r = next_u01(rng) * total;
    double cum = 0.0;
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      cum += d2[i];
      if (cum > r && d2[i] > 0.0) {
        pick = i;
        break;
      }
    }
    if (pick == n) {  // r landed on the cumulative tail
      for (std::size_t i = n; i-- > 0;) {
        if (d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    }
    centroids.push_back(densify(points[pick].entries, dim));
    cn = norm2(centroids.back());
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], dist2(points[i], centroids.back(), cn));
  }
  return centroids;
}

struct AssignResult {
  std::vector<std::uint32_t> assign;
  std::vector<double> point_d2;
  double sse = 0.0;
};

AssignResult assign_all(const std::vector<Point>& points,
                        const std::vector<std::vector<double>>& centroids) {
  AssignResult res;
  res.assign.resize(points.size());
  res.point_d2.resize(points.size());
  std::vector<double> cnorm(centroids.size());
  for (std::size_t c = 0; c < centroids.size(); ++c) cnorm[c] = norm2(centroids[c]);
  for (std::size_t i = 0; i < points.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_c = 0;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double d = dist2(points[i], centroids[c], cnorm[c]);
      if (d < best) {  // strict: ties keep the lowest index
        best = d;
        best_c = static_cast<std::uint32_t>(c);
      }
    }
    res.assign[i] = best_c;
    res.point_d2[i] = best;
    res.sse += best;
  }
  return res;
}

ClusterModel fit_impl(std::vector<Point> points, std::size_t dim, std::uint32_t k,
                      std::uint64_t seed, const KmeansOptions& options) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  const std::size_t distinct = count_distinct(points);
  if (k > distinct)
    throw std::invalid_argument("k (" + std::to_string(k) +
                                ") exceeds the number of distinct points (" +
                                std::to_string(distinct) + ")");

  std::mt19937_64 rng(seed);
  auto centroids = kmeanspp_init(points, dim, k, rng);

  ClusterModel model;
  model.k = k;
  model.dim = dim;
  model.seed = seed;

  std::vector<std::uint32_t> prev_assign;
  bool have_prev = false;
  bool reseeded_last = false;
  AssignResult cur;

  for (std::uint32_t iter = 1;; ++iter) {
    cur = assign_all(points, centroids);
    model.sse_history.push_back(cur.sse);
    model.iterations = iter;
    const bool stable = have_prev && !reseeded_last && cur.assign == prev_assign;
    if (stable || iter >= options.max_iter) break;
    prev_assign = cur.assign;
    have_prev = true;

    // Update step: centroid = mean of its members.
    std::vector<std::vector<double>> next(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      ++counts[cur.assign[i]];
      for (const auto& [idx, v] : points[i].entries) next[cur.assign[i]][idx] += v;
    }
    for (std::uint32_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      const double inv = 1.0 / static_cast<double>(counts[c]);
      for (double& x : next[c]) x *= inv;
    }

    // Re-seed empty clusters with the points farthest from their centroids.
    reseeded_last = false;
    std::vector<double> d2 = cur.point_d2;
    for (std::uint32_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = 0;
      for (std::size_t i = 1; i < points.size(); ++i)
        if (d2[i] > d2[far]) far = i;
      next[c] = densify(points[far].entries, dim);
      d2[far] = -1.0;  // not available for another empty cluster
      reseeded_last = true;
    }

    double shift2 = 0.0;
    for (std::uint32_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        const double d = next[c][j] - centroids[c][j];
        s += d * d;
      }
      shift2 = std::max(shift2, s);
    }
    centroids = std::move(next);

    if (!reseeded_last && std::sqrt(shift2) < options.tol) {
      cur = assign_all(points, centroids);  // sync assignments to final centroids
      model.sse_history.push_back(cur.sse);
      model.iterations = iter + 1;
      break;
    }
  }

  model.centroids = std::move(centroids);
  model.assignments = std::move(cur.assign);
  model.sse = cur.sse;
  return model;
}

std::vector<Point> to_points(std::span<const SparsePoint> sparse, std::size_t dim) {
  std::vector<Point> points;
  points.reserve(sparse.size());
  for (const auto& s : sparse) {
    Point p;
    p.entries = s;
    std::sort(p.entries.begin(), p.entries.end());
    for (const auto& [i, v] : p.entries) {
      if (i >= dim) throw std::invalid_argument("sparse index out of range");
      p.norm2 += v * v;
    }
    points.push_back(std::move(p));
  }
  return points;
}

std::vector<Point> to_points(std::span<const std::vector<double>> dense, std::size_t dim) {
  std::vector<Point> points;
  points.reserve(dense.size());
  for (const auto& v : dense) {
    if (v.size() != dim) throw std::invalid_argument("dimension mismatch");
    Point p;
    for (std::uint32_t i = 0; i < v.size(); ++i) {
      if (v[i] != 0.0) {
        p.entries.emplace_back(i, v[i]);
        p.norm2 += v[i] * v[i];
      }
    }
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace

ClusterModel kmeans_fit(std::span<const std::vector<double>> points, std::uint32_t k,
                        std::uint64_t seed, const KmeansOptions& options) {
  if (points.empty()) throw std::invalid_argument("no input points");
  return fit_impl(to_points(points, points.front().size()), points.front().size(), k,
                  seed, options);
}

ClusterModel kmeans_fit_sparse(std::span<const SparsePoint> points, std::size_t dim,
                               std::uint32_t k, std::uint64_t seed,
                               const KmeansOptions& options) {
  if (points.empty()) throw std::invalid_argument("no input points");
  return fit_impl(to_points(points, dim), dim, k, seed, options);
}

std::vector<std::pair<std::uint32_t, double>> sse_curve(
    std::span<const std::vector<double>> points, std::span<const std::uint32_t> k_values,
    std::uint64_t seed, const KmeansOptions& options) {
  if (std::adjacent_find(k_values.begin(), k_values.end(), std::greater_equal<>{}) !=
      k_values.end())
    throw std::invalid_argument("k values must be strictly ascending");
  std::vector<std::pair<std::uint32_t, double>> curve;
  for (auto k : k_values) curve.emplace_back(k, kmeans_fit(points, k, seed, options).sse);
  return curve;
}

std::vector<std::pair<std::uint32_t, double>> sse_curve_sparse(
    std::span<const SparsePoint> points, std::size_t dim,
    std::span<const std::uint32_t> k_values, std::uint64_t seed,
    const KmeansOptions& options) {
  if (std::adjacent_find(k_values.begin(), k_values.end(), std::greater_equal<>{}) !=
      k_values.end())
    throw std::invalid_argument("k values must be strictly ascending");
  std::vector<std::pair<std::uint32_t, double>> curve;
  for (auto k : k_values)
    curve.emplace_back(k, kmeans_fit_sparse(points, dim, k, seed, options).sse);
  return curve;
}

std::uint32_t elbow_select(std::span<const std::pair<std::uint32_t, double>> curve) {
  if (curve.size() < 3)
    throw std::invalid_argument("elbow selection needs at least 3 curve points");
  std::size_t best = 1;
  double best_d2 = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const double d2 = (curve[i - 1].second - curve[i].second) -
                      (curve[i].second - curve[i + 1].second);
    if (d2 > best_d2) {  // strict: ties keep the smallest k
      best_d2 = d2;
      best = i;
    }
  }
  return curve[best].first;
}

}  // namespace vulnwatch
