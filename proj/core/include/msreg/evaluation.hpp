#pragma once

#include <cstdint>
#include <string>

#include "msreg/dataset.hpp"
#include "msreg/ensemble.hpp"
#include "msreg/stats.hpp"

namespace msreg {

struct ExperimentConfig {
  RestartPolicy policy;  // n_restarts / max_iterations; its seed is unused --
                         // every stage derives its own from `seed` below
  int outer_folds = 5;
  int inner_folds = 5;
  int k_cap = 25;
  std::uint64_t seed = 0;
  // fit normalization on the full dataset before splitting (the literal
  // protocol) instead of per training fold (the leak-free default)
  bool normalize_whole = false;
};

struct ExperimentReport {
  std::string dataset_id;
  std::string regressor;

  int k_empty_full = 0;               // scan over the whole normalized dataset
  std::vector<int> k_empty_per_fold;  // scan per outer training fold

  double mae_pm1 = 0.0;
  double mae_heuristic = 0.0;  // Methodology I: K_empty/2
  double mae_cvk = 0.0;        // Methodology II: nested CV
  TTestResult p_heuristic;     // vs PM_1, per-instance paired
  TTestResult p_cvk;

  std::vector<int> chosen_j_heuristic;  // per outer fold
  std::vector<int> chosen_j_cvk;
};

// K_empty of a dataset as a whole: normalize over all rows, then scan
// k = 2..k_cap under the configured restart policy.
int full_data_k_empty(const Dataset& dataset, const ExperimentConfig& config);

// 5-fold (configurable) outer cross-validation: per fold, normalize on the
// training rows, select j by both methodologies, predict the test fold with
// PM_1 and both ensembles; pool per-instance absolute errors across folds
// and compare ensembles against PM_1 with paired t-tests.
ExperimentReport run_experiment(const Dataset& dataset, const RegressorSpec& spec,
                                const ExperimentConfig& config);

struct ErrorProfile {
  std::string dataset_id;
  std::string regressor;
  std::vector<double> mae_by_j;  // index 0 holds j = 1
  int highlighted_j = 1;         // Methodology I choice from the full-data scan
};

// Pooled outer-CV MAE of average_first_j for every j up to the smallest
// max_trainable_k across folds (further capped at profile_cap).
ErrorProfile build_error_profile(const Dataset& dataset, const RegressorSpec& spec,
                                 const ExperimentConfig& config,
                                 int profile_cap = 25);

}  // namespace msreg
