#pragma once

#include <optional>
#include <span>

#include "msreg/kmeans.hpp"
#include "msreg/matrix.hpp"
#include "msreg/regressor.hpp"

namespace msreg {

// PM_k: the training fold clustered at scale k with one regressor per
// sufficiently populated cluster. Test points route to the nearest centroid's
// model. PM_1 is simply the base regressor on the whole fold.
struct PredictionModel {
  int k = 1;
  RegressorSpec spec;
  Matrix centroids;  // k x d for k > 1; empty for k == 1
  // one entry per cluster; nullopt marks a cluster that fell back to the
  // full-fold model (too few rows to fit its own)
  std::vector<std::optional<FittedRegressor>> cluster_models;
  FittedRegressor fallback;
};

PredictionModel train_pm(const Matrix& x, const Vector& y, int k,
                         const RegressorSpec& spec, const RestartPolicy& policy);

// Variant reusing a clustering and a fallback the caller already has; the
// experiment driver trains PM_1..PM_J on one fold and shares both across
// scales. Produces exactly what train_pm would for the same inputs.
PredictionModel train_pm(const Matrix& x, const Vector& y,
                         const Clustering& clustering, const RegressorSpec& spec,
                         const FittedRegressor& fallback);

double predict_pm(const PredictionModel& pm, std::span<const double> x);

// Whether PM_k built from this clustering would hold at least one real
// cluster model: no empty cluster in the returned run and some cluster with
// at least spec.min_train_rows rows.
bool scale_is_trainable(const Clustering& clustering, const RegressorSpec& spec);

// Largest k <= k_cap whose best clustering is trainable under spec; k = 1
// (no clustering) always qualifies.
int max_trainable_k(const Matrix& x, const RegressorSpec& spec,
                    const RestartPolicy& policy, int k_cap);

}  // namespace msreg
