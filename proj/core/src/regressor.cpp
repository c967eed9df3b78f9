#include "msreg/regressor.hpp"

#include <stdexcept>

namespace msreg {

RegressorSpec RegressorSpec::make(RegressorKind kind) {
  RegressorSpec spec;
  spec.kind = kind;
  spec.min_train_rows = kind == RegressorKind::random_forest ? 10 : 2;
  return spec;
}

RegressorSpec RegressorSpec::parse(const std::string& name) {
  if (name == "ols") return make(RegressorKind::ols);
  if (name == "stepwise") return make(RegressorKind::stepwise);
  if (name == "forest") return make(RegressorKind::random_forest);
  throw std::invalid_argument("unknown regressor \"" + name +
                              "\" (expected ols, stepwise or forest)");
}

std::string RegressorSpec::name() const {
  switch (kind) {
    case RegressorKind::ols:
      return "ols";
    case RegressorKind::stepwise:
      return "stepwise";
    case RegressorKind::random_forest:
      return "forest";
  }
  return "?";
}

double FittedRegressor::predict(std::span<const double> x) const {
  if (x.size() != n_features)
    throw std::invalid_argument("predict: feature dimension mismatch");
  if (kind == RegressorKind::random_forest) {
    double s = 0.0;
    for (const RegressionTree& tree : trees) s += tree.predict(x);
    return s / static_cast<double>(trees.size());
  }
  double value = intercept;
  for (std::size_t j = 0; j < n_features; ++j) value += coefficients[j] * x[j];
  return value;
}

FittedRegressor fit_regressor(const RegressorSpec& spec, const Matrix& x,
                              const Vector& y) {
  switch (spec.kind) {
    case RegressorKind::ols:
      return fit_ols(x, y);
    case RegressorKind::stepwise:
      return fit_stepwise(x, y, spec.stepwise);
    case RegressorKind::random_forest:
      return fit_random_forest(x, y, spec.forest);
  }
  throw std::logic_error("fit_regressor: bad kind");
}

double predict(const FittedRegressor& model, std::span<const double> x) {
  return model.predict(x);
}

}  // namespace msreg
