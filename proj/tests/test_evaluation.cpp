#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "msreg/evaluation.hpp"
#include "test_support.hpp"

using namespace msreg;

namespace {

// three separated regions with different linear laws plus mild noise: small
// enough to cross-validate quickly, structured enough that clustering helps
Dataset make_segmented(std::size_t per_blob, double sigma, std::uint64_t seed) {
  Dataset ds;
  ds.id = "segmented";
  ds.feature_names = {"x1", "x2"};
  ds.target_name = "y";
  ds.features = testutil::make_blobs({{0, 0}, {6, 0}, {0, 6}}, per_blob, 0.7, seed);
  ds.target.resize(ds.features.rows());
  Rng noise(derive_seed(seed, {99}));
  for (std::size_t i = 0; i < ds.features.rows(); ++i) {
    double x1 = ds.features(i, 0), x2 = ds.features(i, 1);
    double v = 0.0;
    if (i < per_blob)
      v = 2.0 + 3.0 * x1 - x2;
    else if (i < 2 * per_blob)
      v = -5.0 + x1 + 2.0 * x2;
    else
      v = 12.0 - 2.0 * x1 + x2;
    ds.target[i] = v + sigma * noise.gaussian();
  }
  return ds;
}

ExperimentConfig quick_config(std::uint64_t seed) {
  ExperimentConfig config;
  config.policy.n_restarts = 8;
  config.outer_folds = 5;
  config.inner_folds = 4;
  config.k_cap = 6;
  config.seed = seed;
  return config;
}

bool reports_equal(const ExperimentReport& a, const ExperimentReport& b) {
  return a.dataset_id == b.dataset_id && a.regressor == b.regressor &&
         a.k_empty_full == b.k_empty_full &&
         a.k_empty_per_fold == b.k_empty_per_fold && a.mae_pm1 == b.mae_pm1 &&
         a.mae_heuristic == b.mae_heuristic && a.mae_cvk == b.mae_cvk &&
         a.p_heuristic.t == b.p_heuristic.t && a.p_heuristic.p == b.p_heuristic.p &&
         a.p_cvk.t == b.p_cvk.t && a.p_cvk.p == b.p_cvk.p &&
         a.chosen_j_heuristic == b.chosen_j_heuristic &&
         a.chosen_j_cvk == b.chosen_j_cvk;
}

}  // namespace

TEST_CASE("run_experiment produces a complete, deterministic report") {
  Dataset ds = make_segmented(30, 0.2, 7001);
  RegressorSpec spec = RegressorSpec::make(RegressorKind::ols);
  ExperimentConfig config = quick_config(31);

  ExperimentReport a = run_experiment(ds, spec, config);
  ExperimentReport b = run_experiment(ds, spec, config);
  CHECK(reports_equal(a, b));

  CHECK(a.dataset_id == "segmented");
  CHECK(a.regressor == "ols");
  CHECK(a.k_empty_full >= 2);
  REQUIRE(a.k_empty_per_fold.size() == 5);
  REQUIRE(a.chosen_j_heuristic.size() == 5);
  REQUIRE(a.chosen_j_cvk.size() == 5);
  for (int j : a.chosen_j_heuristic) CHECK(j >= 1);
  for (int j : a.chosen_j_cvk) CHECK(j >= 1);
  CHECK(a.mae_pm1 > 0.0);
  CHECK(a.mae_heuristic > 0.0);
  CHECK(a.mae_cvk > 0.0);
  CHECK(a.p_heuristic.p >= 0.0);
  CHECK(a.p_heuristic.p <= 1.0);

  // on cleanly segmented data the local models win decisively
  CHECK(a.mae_cvk < a.mae_pm1);
}

TEST_CASE("a different seed moves the numbers") {
  Dataset ds = make_segmented(20, 0.3, 7002);
  RegressorSpec spec = RegressorSpec::make(RegressorKind::ols);
  ExperimentReport a = run_experiment(ds, spec, quick_config(1));
  ExperimentReport c = run_experiment(ds, spec, quick_config(2));
  CHECK(a.mae_pm1 != c.mae_pm1);  // different folds, different pooled errors
}

TEST_CASE("the error profile agrees with the report at j = 1") {
  Dataset ds = make_segmented(24, 0.25, 7003);
  RegressorSpec spec = RegressorSpec::make(RegressorKind::ols);
  ExperimentConfig config = quick_config(77);

  ExperimentReport report = run_experiment(ds, spec, config);
  ErrorProfile profile = build_error_profile(ds, spec, config);

  REQUIRE(!profile.mae_by_j.empty());
  // both pool the same per-instance PM_1 errors over the same folds
  CHECK(profile.mae_by_j[0] == report.mae_pm1);

  CHECK(profile.dataset_id == "segmented");
  CHECK(profile.regressor == "ols");
  int j_max = static_cast<int>(profile.mae_by_j.size());
  CHECK(profile.highlighted_j >= 1);
  CHECK(profile.highlighted_j <= j_max);
  CHECK(profile.highlighted_j ==
        std::clamp(report.k_empty_full / 2, 1, j_max));
  for (double m : profile.mae_by_j) CHECK(m > 0.0);
}

TEST_CASE("profile_cap truncates the curve") {
  Dataset ds = make_segmented(24, 0.25, 7004);
  RegressorSpec spec = RegressorSpec::make(RegressorKind::ols);
  ExperimentConfig config = quick_config(78);
  ErrorProfile full = build_error_profile(ds, spec, config);
  ErrorProfile capped = build_error_profile(ds, spec, config, 2);
  REQUIRE(capped.mae_by_j.size() == std::min<std::size_t>(2, full.mae_by_j.size()));
  CHECK(capped.mae_by_j[0] == full.mae_by_j[0]);
  if (full.mae_by_j.size() >= 2) CHECK(capped.mae_by_j[1] == full.mae_by_j[1]);
}

TEST_CASE("full_data_k_empty matches the report and stays put") {
  Dataset ds = make_segmented(20, 0.2, 7005);
  ExperimentConfig config = quick_config(79);
  int scan = full_data_k_empty(ds, config);
  CHECK(scan >= 2);
  CHECK(scan <= config.k_cap);
  CHECK(full_data_k_empty(ds, config) == scan);

  RegressorSpec spec = RegressorSpec::make(RegressorKind::ols);
  ExperimentReport report = run_experiment(ds, spec, config);
  CHECK(report.k_empty_full == scan);
}

TEST_CASE("whole-dataset normalization is accepted and deterministic") {
  Dataset ds = make_segmented(20, 0.2, 7006);
  RegressorSpec spec = RegressorSpec::make(RegressorKind::ols);
  ExperimentConfig config = quick_config(80);
  config.normalize_whole = true;
  ExperimentReport a = run_experiment(ds, spec, config);
  ExperimentReport b = run_experiment(ds, spec, config);
  CHECK(reports_equal(a, b));
}

TEST_CASE("run_experiment validates its configuration") {
  Dataset ds = make_segmented(10, 0.2, 7007);
  RegressorSpec spec = RegressorSpec::make(RegressorKind::ols);

  ExperimentConfig bad_folds = quick_config(1);
  bad_folds.outer_folds = 1;
  CHECK_THROWS_AS(run_experiment(ds, spec, bad_folds), std::invalid_argument);

  ExperimentConfig bad_cap = quick_config(1);
  bad_cap.k_cap = 1;
  CHECK_THROWS_AS(run_experiment(ds, spec, bad_cap), std::invalid_argument);

  Dataset tiny = make_segmented(1, 0.0, 7008);  // 3 rows, 5 folds
  CHECK_THROWS_AS(run_experiment(tiny, spec, quick_config(1)),
                  std::invalid_argument);
}

TEST_CASE("forest experiments run end to end on small data") {
  Dataset ds = make_segmented(12, 0.3, 7009);
  RegressorSpec spec = RegressorSpec::make(RegressorKind::random_forest);
  spec.forest.n_trees = 10;
  ExperimentConfig config = quick_config(81);
  config.k_cap = 4;
  config.inner_folds = 3;

  ExperimentReport report = run_experiment(ds, spec, config);
  CHECK(report.regressor == "forest");
  CHECK(report.mae_pm1 > 0.0);
  REQUIRE(report.chosen_j_cvk.size() == 5);
  for (int j : report.chosen_j_cvk) {
    CHECK(j >= 1);
    CHECK(j <= 4);
  }
}
