#include "msreg/prediction_model.hpp"

#include <stdexcept>

#include "msreg/rng.hpp"

namespace msreg {

PredictionModel train_pm(const Matrix& x, const Vector& y, int k,
                         const RegressorSpec& spec, const RestartPolicy& policy) {
  if (k < 1) throw std::invalid_argument("train_pm: k must be >= 1");
  if (x.rows() < static_cast<std::size_t>(spec.min_train_rows))
    throw std::invalid_argument("train_pm: too few training rows");

  const FittedRegressor fallback = fit_regressor(spec, x, y);
  if (k == 1) {
    PredictionModel pm;
    pm.k = 1;
    pm.spec = spec;
    pm.fallback = fallback;
    return pm;
  }
  const Clustering clustering = kmeans_best_of(x, k, policy);
  return train_pm(x, y, clustering, spec, fallback);
}

PredictionModel train_pm(const Matrix& x, const Vector& y,
                         const Clustering& clustering, const RegressorSpec& spec,
                         const FittedRegressor& fallback) {
  if (x.rows() < static_cast<std::size_t>(spec.min_train_rows))
    throw std::invalid_argument("train_pm: too few training rows");
  if (clustering.assignments.size() != x.rows())
    throw std::invalid_argument("train_pm: clustering does not match the fold");

  PredictionModel pm;
  pm.k = clustering.k;
  pm.spec = spec;
  pm.centroids = clustering.centroids;
  pm.fallback = fallback;
  if (pm.k == 1) return pm;

  std::vector<std::vector<int>> members(static_cast<std::size_t>(clustering.k));
  for (std::size_t r = 0; r < clustering.assignments.size(); ++r)
    members[static_cast<std::size_t>(clustering.assignments[r])].push_back(
        static_cast<int>(r));

  pm.cluster_models.resize(static_cast<std::size_t>(clustering.k));
  for (std::size_t c = 0; c < members.size(); ++c) {
    if (members[c].size() < static_cast<std::size_t>(spec.min_train_rows))
      continue;  // fallback marker: the global model answers for this cluster
    RegressorSpec cluster_spec = spec;
    // decorrelate per-cluster forests; linear kinds ignore the seed
    cluster_spec.forest.seed = derive_seed(spec.forest.seed, {c});
    pm.cluster_models[c] =
        fit_regressor(cluster_spec, x.select_rows(members[c]), select(y, members[c]));
  }
  return pm;
}

double predict_pm(const PredictionModel& pm, std::span<const double> x) {
  if (pm.k == 1) return pm.fallback.predict(x);
  const int c = assign_point(x, pm.centroids);
  const auto& model = pm.cluster_models[static_cast<std::size_t>(c)];
  return model ? model->predict(x) : pm.fallback.predict(x);
}

bool scale_is_trainable(const Clustering& clustering, const RegressorSpec& spec) {
  if (clustering.best_run_hit_empty) return false;
  for (int size : clustering.cluster_sizes())
    if (size >= spec.min_train_rows) return true;
  return false;
}

int max_trainable_k(const Matrix& x, const RegressorSpec& spec,
                    const RestartPolicy& policy, int k_cap) {
  if (k_cap < 1) throw std::invalid_argument("max_trainable_k: k_cap must be >= 1");
  int best = 1;
  for (int k = 2; k <= k_cap && static_cast<std::size_t>(k) <= x.rows(); ++k)
    if (scale_is_trainable(kmeans_best_of(x, k, policy), spec)) best = k;
  return best;
}

}  // namespace msreg
