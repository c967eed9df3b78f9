#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "msreg/matrix.hpp"

namespace msreg {

enum class RegressorKind { ols, stepwise, random_forest };

struct StepwiseParams {
  int max_steps = 0;  // 0: no cap short of the feature count
};

struct ForestParams {
  int n_trees = 100;
  int mtry = 0;  // 0: max(1, n_features / 3)
  int min_leaf = 5;
  std::uint64_t seed = 0;
};

struct RegressorSpec {
  RegressorKind kind = RegressorKind::ols;
  StepwiseParams stepwise;
  ForestParams forest;
  // Minimum rows a training set (or a cluster) must have before this kind
  // of model is fitted on it; forests need more points than the linear fits.
  int min_train_rows = 2;

  static RegressorSpec make(RegressorKind kind);
  // accepts "ols" | "stepwise" | "forest"
  static RegressorSpec parse(const std::string& name);
  std::string name() const;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  double predict(std::span<const double> x) const;
};

struct FittedRegressor {
  RegressorKind kind = RegressorKind::ols;
  std::size_t n_features = 0;
  // linear kinds: intercept + one coefficient per feature (zeros for
  // features stepwise did not select)
  double intercept = 0.0;
  Vector coefficients;
  std::vector<int> selected;  // stepwise: features in the order added
  // forest
  std::vector<RegressionTree> trees;

  double predict(std::span<const double> x) const;
};

FittedRegressor fit_ols(const Matrix& x, const Vector& y);
FittedRegressor fit_stepwise(const Matrix& x, const Vector& y,
                             const StepwiseParams& params = {});
FittedRegressor fit_random_forest(const Matrix& x, const Vector& y,
                                  const ForestParams& params = {});

FittedRegressor fit_regressor(const RegressorSpec& spec, const Matrix& x,
                              const Vector& y);
double predict(const FittedRegressor& model, std::span<const double> x);

}  // namespace msreg
