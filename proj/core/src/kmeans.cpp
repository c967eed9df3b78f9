#include "msreg/kmeans.hpp"

#include <limits>
#include <stdexcept>

#include "msreg/parallel.hpp"
#include "msreg/rng.hpp"

namespace msreg {

namespace {

inline double sq_dist(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

}  // namespace

std::vector<int> Clustering::cluster_sizes() const {
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (int a : assignments) ++sizes[static_cast<std::size_t>(a)];
  return sizes;
}

Clustering lloyd_once(const Matrix& points, int k, std::uint64_t seed,
                      int max_iterations) {
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  if (n == 0) throw std::invalid_argument("lloyd_once: no points");
  if (k < 1) throw std::invalid_argument("lloyd_once: k must be >= 1");
  if (static_cast<std::size_t>(k) > n)
    throw std::invalid_argument("lloyd_once: k exceeds the number of rows");
  if (max_iterations < 1)
    throw std::invalid_argument("lloyd_once: max_iterations must be >= 1");

  Clustering result;
  result.k = k;
  result.centroids = Matrix(static_cast<std::size_t>(k), d);

  Rng rng(seed);
  const std::vector<int> init = sample_without_replacement(
      static_cast<int>(n), k, rng);
  for (int c = 0; c < k; ++c) {
    const double* src = points.data() + static_cast<std::size_t>(init[c]) * d;
    double* dst = result.centroids.data() + static_cast<std::size_t>(c) * d;
    for (std::size_t i = 0; i < d; ++i) dst[i] = src[i];
  }

  result.assignments.assign(n, -1);
  std::vector<int> previous(n, -1);
  std::vector<double> sums(static_cast<std::size_t>(k) * d);
  std::vector<int> counts(static_cast<std::size_t>(k));
  std::vector<bool> frozen(static_cast<std::size_t>(k), false);

  for (int iter = 0; iter < max_iterations; ++iter) {
    // assignment step; distortion falls out for free
    double j_total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double* x = points.data() + r * d;
      int best = 0;
      double best_dist = sq_dist(x, result.centroids.data(), d);
      for (int c = 1; c < k; ++c) {
        const double dist =
            sq_dist(x, result.centroids.data() + static_cast<std::size_t>(c) * d, d);
        if (dist < best_dist) {  // strict: ties stay at the lowest index
          best_dist = dist;
          best = c;
        }
      }
      result.assignments[r] = best;
      j_total += best_dist;
    }
    result.distortion_trace.push_back(j_total);
    result.distortion = j_total;

    if (result.assignments == previous) break;
    previous = result.assignments;

    // update step: means of assigned points; empty clusters keep their
    // stale centroid for the rest of the run and flag it
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t c = static_cast<std::size_t>(result.assignments[r]);
      ++counts[c];
      const double* x = points.data() + r * d;
      double* s = sums.data() + c * d;
      for (std::size_t i = 0; i < d; ++i) s[i] += x[i];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] == 0) {
        result.hit_empty = true;
        frozen[static_cast<std::size_t>(c)] = true;
        continue;
      }
      if (frozen[static_cast<std::size_t>(c)]) continue;
      const double inv = 1.0 / counts[static_cast<std::size_t>(c)];
      double* dst = result.centroids.data() + static_cast<std::size_t>(c) * d;
      const double* s = sums.data() + static_cast<std::size_t>(c) * d;
      for (std::size_t i = 0; i < d; ++i) dst[i] = s[i] * inv;
    }
  }

  result.best_run_hit_empty = result.hit_empty;
  return result;
}

Clustering kmeans_best_of(const Matrix& points, int k, const RestartPolicy& policy) {
  if (policy.n_restarts < 1)
    throw std::invalid_argument("kmeans_best_of: n_restarts must be >= 1");

  const std::size_t runs = static_cast<std::size_t>(policy.n_restarts);
  std::vector<Clustering> results(runs);
  parallel_for(runs, [&](std::size_t i) {
    const std::uint64_t seed =
        derive_seed(policy.seed, {static_cast<std::uint64_t>(k), i});
    results[i] = lloyd_once(points, k, seed, policy.max_iterations);
  });

  // reduce by (distortion, restart index): scheduling cannot change the pick
  std::size_t best = 0;
  bool any_empty = results[0].hit_empty;
  for (std::size_t i = 1; i < runs; ++i) {
    any_empty = any_empty || results[i].hit_empty;
    if (results[i].distortion < results[best].distortion) best = i;
  }

  Clustering chosen = std::move(results[best]);
  chosen.best_run_hit_empty = chosen.hit_empty;
  chosen.hit_empty = any_empty;
  return chosen;
}

int assign_point(std::span<const double> x, const Matrix& centroids) {
  if (centroids.rows() == 0)
    throw std::invalid_argument("assign_point: no centroids");
  if (x.size() != centroids.cols())
    throw std::invalid_argument("assign_point: dimension mismatch");

  int best = 0;
  double best_dist = sq_dist(x.data(), centroids.data(), x.size());
  for (std::size_t c = 1; c < centroids.rows(); ++c) {
    const double dist =
        sq_dist(x.data(), centroids.data() + c * centroids.cols(), x.size());
    if (dist < best_dist) {
      best_dist = dist;
      best = static_cast<int>(c);
    }
  }
  return best;
}

int find_k_empty(const Matrix& points, const RestartPolicy& policy, int k_cap) {
  if (k_cap < 2) throw std::invalid_argument("find_k_empty: k_cap must be >= 2");
  for (int k = 2; k < k_cap; ++k) {
    if (static_cast<std::size_t>(k) > points.rows()) return k;
    if (kmeans_best_of(points, k, policy).hit_empty) return k;
  }
  return k_cap;
}

}  // namespace msreg
