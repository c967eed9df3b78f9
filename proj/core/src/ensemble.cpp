#include "msreg/ensemble.hpp"

#include <stdexcept>

#include "msreg/folds.hpp"
#include "msreg/parallel.hpp"
#include "msreg/rng.hpp"
#include "msreg/stats.hpp"

namespace msreg {

Matrix per_pm_predictions(std::span<const PredictionModel> pms, const Matrix& test) {
  Matrix out(pms.size(), test.rows());
  parallel_for(pms.size(), [&](std::size_t m) {
    for (std::size_t i = 0; i < test.rows(); ++i)
      out(m, i) = predict_pm(pms[m], test.row(i));
  });
  return out;
}

Vector average_first_j(std::span<const PredictionModel> pms, const Matrix& test,
                       int j) {
  if (j < 1 || static_cast<std::size_t>(j) > pms.size())
    throw std::invalid_argument("average_first_j: j out of range");
  Vector sums(test.rows(), 0.0);
  for (int m = 0; m < j; ++m)
    for (std::size_t i = 0; i < test.rows(); ++i)
      sums[i] += predict_pm(pms[static_cast<std::size_t>(m)], test.row(i));
  for (double& s : sums) s /= static_cast<double>(j);
  return sums;
}

EnsembleResult make_ensemble_result(std::span<const PredictionModel> pms,
                                    const Matrix& test, int chosen_j) {
  if (chosen_j < 1 || static_cast<std::size_t>(chosen_j) > pms.size())
    throw std::invalid_argument("make_ensemble_result: chosen_j out of range");
  EnsembleResult result;
  result.chosen_j = chosen_j;
  result.per_pm_predictions =
      per_pm_predictions(pms.first(static_cast<std::size_t>(chosen_j)), test);
  result.predictions.assign(test.rows(), 0.0);
  for (int m = 0; m < chosen_j; ++m)
    for (std::size_t i = 0; i < test.rows(); ++i)
      result.predictions[i] += result.per_pm_predictions(static_cast<std::size_t>(m), i);
  for (double& p : result.predictions) p /= static_cast<double>(chosen_j);
  return result;
}

int select_j_heuristic(const Matrix& train_x, const RegressorSpec& spec,
                       const RestartPolicy& policy, int k_cap) {
  const int k_empty = find_k_empty(train_x, policy, k_cap);
  const int trainable = max_trainable_k(train_x, spec, policy, k_cap);
  int j = k_empty / 2;  // floor; the scan value may be odd
  if (j > trainable) j = trainable;
  if (j < 1) j = 1;
  return j;
}

NestedCvSelection select_j_nested_cv_detailed(const Matrix& train_x,
                                              const Vector& train_y,
                                              const RegressorSpec& spec,
                                              const RestartPolicy& policy,
                                              const EnsembleConfig& config) {
  if (config.inner_folds < 2)
    throw std::invalid_argument("select_j_nested_cv: inner_folds must be >= 2");
  if (config.k_cap < 1)
    throw std::invalid_argument("select_j_nested_cv: k_cap must be >= 1");
  if (train_x.rows() < static_cast<std::size_t>(config.inner_folds))
    throw std::invalid_argument("select_j_nested_cv: too few rows for inner split");

  NestedCvSelection selection;
  if (config.k_cap == 1) return selection;  // single candidate, nothing to search

  const FoldPlan plan =
      kfold_split(train_x.rows(), config.inner_folds, derive_seed(config.seed, {0}));

  // mae_by_fold[f][j-1] = MAE of averaging PM_1..PM_j on inner test fold f
  std::vector<std::vector<double>> mae_by_fold(
      static_cast<std::size_t>(config.inner_folds));

  for (int f = 0; f < config.inner_folds; ++f) {
    const std::vector<int> train_idx = plan.train_indices(f);
    const std::vector<int> test_idx = plan.test_indices(f);
    const Matrix ix = train_x.select_rows(train_idx);
    const Vector iy = select(train_y, train_idx);
    const Matrix tx = train_x.select_rows(test_idx);
    const Vector ty = select(train_y, test_idx);

    if (ix.rows() < static_cast<std::size_t>(spec.min_train_rows))
      throw std::invalid_argument("select_j_nested_cv: too few rows for inner split");

    RestartPolicy fold_policy = policy;
    fold_policy.seed = derive_seed(config.seed, {1, static_cast<std::uint64_t>(f)});

    // one clustering per scale, reused for the trainability scan and the PMs
    std::vector<Clustering> clusterings;  // index c holds scale c + 2
    int j_max = 1;
    for (int k = 2; k <= config.k_cap && static_cast<std::size_t>(k) <= ix.rows();
         ++k) {
      clusterings.push_back(kmeans_best_of(ix, k, fold_policy));
      if (scale_is_trainable(clusterings.back(), spec)) j_max = k;
    }

    const FittedRegressor fallback = fit_regressor(spec, ix, iy);
    std::vector<PredictionModel> pms;
    pms.reserve(static_cast<std::size_t>(j_max));
    PredictionModel pm1;
    pm1.k = 1;
    pm1.spec = spec;
    pm1.fallback = fallback;
    pms.push_back(std::move(pm1));
    for (int k = 2; k <= j_max; ++k)
      pms.push_back(train_pm(ix, iy, clusterings[static_cast<std::size_t>(k - 2)],
                             spec, fallback));

    const Matrix preds = per_pm_predictions(pms, tx);
    Vector running(tx.rows(), 0.0);
    std::vector<double>& maes = mae_by_fold[static_cast<std::size_t>(f)];
    Vector averaged(tx.rows());
    for (int j = 1; j <= j_max; ++j) {
      for (std::size_t i = 0; i < tx.rows(); ++i) {
        running[i] += preds(static_cast<std::size_t>(j - 1), i);
        averaged[i] = running[i] / static_cast<double>(j);
      }
      maes.push_back(mae(averaged, ty));
    }
  }

  // candidates end at the smallest per-fold maximum, so every candidate was
  // measured on every fold
  std::size_t common = mae_by_fold[0].size();
  for (const auto& fold_maes : mae_by_fold)
    if (fold_maes.size() < common) common = fold_maes.size();

  selection.common_j_max = static_cast<int>(common);
  selection.mean_mae.resize(common);
  for (std::size_t j = 0; j < common; ++j) {
    double s = 0.0;
    for (const auto& fold_maes : mae_by_fold) s += fold_maes[j];
    selection.mean_mae[j] = s / static_cast<double>(mae_by_fold.size());
  }

  selection.chosen_j = 1;
  for (std::size_t j = 1; j < common; ++j)
    if (selection.mean_mae[j] <
        selection.mean_mae[static_cast<std::size_t>(selection.chosen_j - 1)])
      selection.chosen_j = static_cast<int>(j + 1);  // strict: ties keep smaller j
  return selection;
}

int select_j_nested_cv(const Matrix& train_x, const Vector& train_y,
                       const RegressorSpec& spec, const RestartPolicy& policy,
                       const EnsembleConfig& config) {
  return select_j_nested_cv_detailed(train_x, train_y, spec, policy, config).chosen_j;
}

}  // namespace msreg
