#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "msreg/matrix.hpp"

namespace msreg {

struct RestartPolicy {
  int n_restarts = 200;
  int max_iterations = 300;
  std::uint64_t seed = 0;
};

struct Clustering {
  int k = 0;
  Matrix centroids;              // k x n_features
  std::vector<int> assignments;  // one entry per training row
  double distortion = 0.0;       // J = sum of squared distances to assigned centroids

  // hit_empty: from lloyd_once, whether THIS run saw an empty cluster; from
  // kmeans_best_of, whether ANY restart did (the conservative scan signal).
  bool hit_empty = false;
  // The selected run's own flag; equals hit_empty for lloyd_once. Trainability
  // checks care about the model actually returned, not the whole restart set.
  bool best_run_hit_empty = false;

  // J after every assignment step, in iteration order (nonincreasing)
  std::vector<double> distortion_trace;

  std::vector<int> cluster_sizes() const;
};

// One run of Lloyd's algorithm. Centroids start as k distinct rows sampled
// uniformly (Forgy); assignment uses squared Euclidean distance with ties
// going to the lowest centroid index; iteration stops when assignments are
// stable or after max_iterations. A cluster that is empty at an update step
// sets hit_empty and its centroid stays unchanged for the remainder of the
// run -- the scan protocol uses empty clusters as a signal, so no repair.
Clustering lloyd_once(const Matrix& points, int k, std::uint64_t seed,
                      int max_iterations = 300);

// Runs lloyd_once policy.n_restarts times with derived seeds and returns the
// run with minimum distortion (ties: lowest restart index). hit_empty is true
// iff any restart hit an empty cluster.
Clustering kmeans_best_of(const Matrix& points, int k, const RestartPolicy& policy);

// index of the nearest centroid (squared Euclidean, ties to lowest index)
int assign_point(std::span<const double> x, const Matrix& centroids);

// Smallest k in {2, 3, ...} for which kmeans_best_of reports hit_empty, or
// k_cap if none does. k beyond the row count cannot even be initialized, so
// an empty cluster is certain and the scan returns that k.
int find_k_empty(const Matrix& points, const RestartPolicy& policy, int k_cap);

}  // namespace msreg
