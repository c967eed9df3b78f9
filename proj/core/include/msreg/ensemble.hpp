#pragma once

#include <cstdint>
#include <span>

#include "msreg/prediction_model.hpp"

namespace msreg {

enum class Methodology { heuristic_half, nested_cv };

struct EnsembleConfig {
  Methodology methodology = Methodology::nested_cv;
  int k_cap = 25;
  int inner_folds = 5;
  std::uint64_t seed = 0;
};

struct EnsembleResult {
  int chosen_j = 1;
  Vector predictions;       // column means of per_pm_predictions
  Matrix per_pm_predictions;  // chosen_j x n_test, retained for profiling
};

// Row m of the result holds predict_pm(pms[m], test row i) for each i.
Matrix per_pm_predictions(std::span<const PredictionModel> pms, const Matrix& test);

// Uniform average of PM_1..PM_j predictions per test row (1 <= j <= pms size).
Vector average_first_j(std::span<const PredictionModel> pms, const Matrix& test,
                       int j);

EnsembleResult make_ensemble_result(std::span<const PredictionModel> pms,
                                    const Matrix& test, int chosen_j);

// Methodology I: K_empty/2, floored, clamped to [1, max_trainable_k].
int select_j_heuristic(const Matrix& train_x, const RegressorSpec& spec,
                       const RestartPolicy& policy, int k_cap);

struct NestedCvSelection {
  int chosen_j = 1;
  int common_j_max = 1;          // min over inner folds of max_trainable_k
  std::vector<double> mean_mae;  // aggregated inner MAE; index 0 is j = 1
};

// Methodology II: inner cross-validation over the training fold; for every
// candidate prefix length j, the MAE of average_first_j on each inner test
// part, averaged over inner folds; argmin with ties to the smallest j.
// Candidates stop at the smallest max_trainable_k seen across inner folds, so
// every candidate is measured on all folds.
NestedCvSelection select_j_nested_cv_detailed(const Matrix& train_x,
                                              const Vector& train_y,
                                              const RegressorSpec& spec,
                                              const RestartPolicy& policy,
                                              const EnsembleConfig& config);

int select_j_nested_cv(const Matrix& train_x, const Vector& train_y,
                       const RegressorSpec& spec, const RestartPolicy& policy,
                       const EnsembleConfig& config);

}  // namespace msreg
