#include "msreg/evaluation.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "msreg/folds.hpp"
#include "msreg/normalization.hpp"
#include "msreg/rng.hpp"

namespace msreg {

namespace {

// Seed tags for the independent stages of one experiment. Every stage owns a
// derived seed so stages can be reordered or parallelized freely.
constexpr std::uint64_t kTagFullScan = 0;
constexpr std::uint64_t kTagOuterSplit = 1;
constexpr std::uint64_t kTagFoldPolicy = 2;
constexpr std::uint64_t kTagNestedCv = 3;
constexpr std::uint64_t kTagForest = 4;

// One outer fold's working set. Clusterings are computed lazily and cached
// by scale: the K_empty scan, the trainability checks and the PM training
// all need the same kmeans_best_of(train, k) result, which is a pure
// function of (points, k, policy), so sharing it changes nothing.
struct FoldPipeline {
  Matrix train_x, test_x;
  Vector train_y, test_y;
  RegressorSpec spec;    // forest seed already derived per fold
  RestartPolicy policy;  // seed already derived per fold
  int k_limit = 1;       // min(k_cap, train rows)

  std::vector<std::optional<Clustering>> cache;

  const Clustering& at(int k) {
    auto& slot = cache[static_cast<std::size_t>(k)];
    if (!slot) slot = kmeans_best_of(train_x, k, policy);
    return *slot;
  }

  bool trainable(int k) {
    if (k <= 1) return true;
    if (k > k_limit) return false;
    return scale_is_trainable(at(k), spec);
  }

  int find_k_empty_cached(int k_cap) {
    for (int k = 2; k < k_cap; ++k) {
      if (static_cast<std::size_t>(k) > train_x.rows()) return k;
      if (at(k).hit_empty) return k;
    }
    return k_cap;
  }

  // Enforces chosen_j <= max_trainable_k without always paying for a full
  // scan: if any scale in [j, k_limit] is trainable the clamp is inactive.
  int clamp_to_trainable(int j) {
    if (j <= 1) return 1;
    if (j > k_limit) j = k_limit;
    for (int k = j; k <= k_limit; ++k)
      if (trainable(k)) return j;
    for (int k = j - 1; k >= 2; --k)
      if (trainable(k)) return k;
    return 1;
  }

  int max_trainable_full(int cap) {
    int best = 1;
    for (int k = 2; k <= cap && k <= k_limit; ++k)
      if (trainable(k)) best = k;
    return best;
  }

  std::vector<PredictionModel> build_pms(int j_max) {
    const FittedRegressor fallback = fit_regressor(spec, train_x, train_y);
    std::vector<PredictionModel> pms;
    pms.reserve(static_cast<std::size_t>(j_max));
    PredictionModel pm1;
    pm1.k = 1;
    pm1.spec = spec;
    pm1.fallback = fallback;
    pms.push_back(std::move(pm1));
    for (int k = 2; k <= j_max; ++k)
      pms.push_back(train_pm(train_x, train_y, at(k), spec, fallback));
    return pms;
  }
};

FoldPipeline make_fold_pipeline(const Dataset& dataset, const RegressorSpec& spec,
                                const ExperimentConfig& config, const FoldPlan& plan,
                                int fold) {
  const std::vector<int> train_idx = plan.train_indices(fold);
  const std::vector<int> test_idx = plan.test_indices(fold);

  FoldPipeline pipe;
  const Matrix raw_train = dataset.features.select_rows(train_idx);
  const Matrix raw_test = dataset.features.select_rows(test_idx);
  const NormalizationParams norm = fit_normalization(
      config.normalize_whole ? dataset.features : raw_train);
  pipe.train_x = apply_normalization(norm, raw_train);
  pipe.test_x = apply_normalization(norm, raw_test);
  pipe.train_y = select(dataset.target, train_idx);
  pipe.test_y = select(dataset.target, test_idx);

  pipe.spec = spec;
  pipe.spec.forest.seed =
      derive_seed(config.seed, {kTagForest, static_cast<std::uint64_t>(fold)});
  pipe.policy = config.policy;
  pipe.policy.seed =
      derive_seed(config.seed, {kTagFoldPolicy, static_cast<std::uint64_t>(fold)});

  pipe.k_limit = config.k_cap;
  if (static_cast<std::size_t>(pipe.k_limit) > pipe.train_x.rows())
    pipe.k_limit = static_cast<int>(pipe.train_x.rows());
  pipe.cache.resize(static_cast<std::size_t>(pipe.k_limit) + 1);
  return pipe;
}

void validate_config(const Dataset& dataset, const ExperimentConfig& config) {
  if (config.outer_folds < 2)
    throw std::invalid_argument("run_experiment: outer_folds must be >= 2");
  if (config.k_cap < 2)
    throw std::invalid_argument("run_experiment: k_cap must be >= 2");
  if (dataset.n_rows() < static_cast<std::size_t>(config.outer_folds))
    throw std::invalid_argument("run_experiment: dataset too small for the folds");
}

void append_abs_errors(const Vector& predictions, const Vector& truth, Vector& pool) {
  for (std::size_t i = 0; i < predictions.size(); ++i)
    pool.push_back(std::fabs(predictions[i] - truth[i]));
}

}  // namespace

int full_data_k_empty(const Dataset& dataset, const ExperimentConfig& config) {
  const NormalizationParams norm = fit_normalization(dataset.features);
  const Matrix normalized = apply_normalization(norm, dataset.features);
  RestartPolicy policy = config.policy;
  policy.seed = derive_seed(config.seed, {kTagFullScan});
  return find_k_empty(normalized, policy, config.k_cap);
}

ExperimentReport run_experiment(const Dataset& dataset, const RegressorSpec& spec,
                                const ExperimentConfig& config) {
  validate_config(dataset, config);

  ExperimentReport report;
  report.dataset_id = dataset.id;
  report.regressor = spec.name();
  report.k_empty_full = full_data_k_empty(dataset, config);

  const FoldPlan plan = kfold_split(dataset.n_rows(), config.outer_folds,
                                    derive_seed(config.seed, {kTagOuterSplit}));

  Vector pooled_pm1, pooled_heuristic, pooled_cvk;
  for (int f = 0; f < config.outer_folds; ++f) {
    FoldPipeline pipe = make_fold_pipeline(dataset, spec, config, plan, f);

    const int k_empty = pipe.find_k_empty_cached(config.k_cap);
    report.k_empty_per_fold.push_back(k_empty);

    const int j_heuristic = pipe.clamp_to_trainable(k_empty / 2);
    report.chosen_j_heuristic.push_back(j_heuristic);

    EnsembleConfig nested;
    nested.methodology = Methodology::nested_cv;
    nested.k_cap = config.k_cap;
    nested.inner_folds = config.inner_folds;
    nested.seed =
        derive_seed(config.seed, {kTagNestedCv, static_cast<std::uint64_t>(f)});
    const int j_cvk = pipe.clamp_to_trainable(select_j_nested_cv(
        pipe.train_x, pipe.train_y, pipe.spec, pipe.policy, nested));
    report.chosen_j_cvk.push_back(j_cvk);

    const int j_top = j_heuristic > j_cvk ? j_heuristic : j_cvk;
    const std::vector<PredictionModel> pms = pipe.build_pms(j_top);

    append_abs_errors(average_first_j(pms, pipe.test_x, 1), pipe.test_y, pooled_pm1);
    append_abs_errors(average_first_j(pms, pipe.test_x, j_heuristic), pipe.test_y,
                      pooled_heuristic);
    append_abs_errors(average_first_j(pms, pipe.test_x, j_cvk), pipe.test_y,
                      pooled_cvk);
  }

  report.mae_pm1 = mean(pooled_pm1);
  report.mae_heuristic = mean(pooled_heuristic);
  report.mae_cvk = mean(pooled_cvk);
  report.p_heuristic = paired_ttest(pooled_heuristic, pooled_pm1);
  report.p_cvk = paired_ttest(pooled_cvk, pooled_pm1);
  return report;
}

ErrorProfile build_error_profile(const Dataset& dataset, const RegressorSpec& spec,
                                 const ExperimentConfig& config, int profile_cap) {
  validate_config(dataset, config);
  if (profile_cap < 1)
    throw std::invalid_argument("build_error_profile: profile_cap must be >= 1");

  ErrorProfile profile;
  profile.dataset_id = dataset.id;
  profile.regressor = spec.name();

  const int k_empty_full = full_data_k_empty(dataset, config);

  const FoldPlan plan = kfold_split(dataset.n_rows(), config.outer_folds,
                                    derive_seed(config.seed, {kTagOuterSplit}));

  const int scan_cap = profile_cap < config.k_cap ? profile_cap : config.k_cap;
  std::vector<FoldPipeline> pipes;
  int j_max = scan_cap;
  for (int f = 0; f < config.outer_folds; ++f) {
    pipes.push_back(make_fold_pipeline(dataset, spec, config, plan, f));
    const int trainable = pipes.back().max_trainable_full(scan_cap);
    if (trainable < j_max) j_max = trainable;
  }

  // pooled per-instance absolute errors for every prefix length at once
  std::vector<Vector> pooled(static_cast<std::size_t>(j_max));
  for (FoldPipeline& pipe : pipes) {
    const std::vector<PredictionModel> pms = pipe.build_pms(j_max);
    const Matrix preds = per_pm_predictions(pms, pipe.test_x);
    Vector running(pipe.test_x.rows(), 0.0);
    for (int j = 1; j <= j_max; ++j) {
      for (std::size_t i = 0; i < running.size(); ++i) {
        running[i] += preds(static_cast<std::size_t>(j - 1), i);
        pooled[static_cast<std::size_t>(j - 1)].push_back(
            std::fabs(running[i] / static_cast<double>(j) - pipe.test_y[i]));
      }
    }
  }

  profile.mae_by_j.resize(static_cast<std::size_t>(j_max));
  for (int j = 0; j < j_max; ++j)
    profile.mae_by_j[static_cast<std::size_t>(j)] =
        mean(pooled[static_cast<std::size_t>(j)]);

  int highlighted = k_empty_full / 2;
  if (highlighted < 1) highlighted = 1;
  if (highlighted > j_max) highlighted = j_max;
  profile.highlighted_j = highlighted;
  return profile;
}

}  // namespace msreg
