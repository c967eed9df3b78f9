#include <cmath>
#include <stdexcept>

#include "msreg/least_squares.hpp"
#include "msreg/regressor.hpp"

namespace msreg {

namespace {

// design matrix [1 | X(selected columns)]
Matrix build_design(const Matrix& x, const std::vector<int>& columns) {
  Matrix d(x.rows(), columns.size() + 1);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    d(r, 0) = 1.0;
    for (std::size_t j = 0; j < columns.size(); ++j)
      d(r, j + 1) = x(r, static_cast<std::size_t>(columns[j]));
  }
  return d;
}

double rss_of(const Matrix& design, const Vector& beta, const Vector& y) {
  double rss = 0.0;
  for (std::size_t r = 0; r < design.rows(); ++r) {
    double pred = 0.0;
    for (std::size_t c = 0; c < design.cols(); ++c) pred += design(r, c) * beta[c];
    const double e = y[r] - pred;
    rss += e * e;
  }
  return rss;
}

// AIC for a Gaussian-error linear model up to a constant:
// n ln(RSS/n) + 2p, p counting the intercept. The clamp keeps exact fits
// (RSS = 0 on tiny clusters) from producing -inf and breaking comparisons.
double aic_of(double rss, std::size_t n, std::size_t p) {
  const double mse = rss / static_cast<double>(n);
  return static_cast<double>(n) * std::log(mse < 1e-300 ? 1e-300 : mse) +
         2.0 * static_cast<double>(p);
}

FittedRegressor fit_linear_on(const Matrix& x, const Vector& y,
                              const std::vector<int>& columns, RegressorKind kind) {
  const Matrix design = build_design(x, columns);
  const Vector beta = solve_least_squares(design, y);
  FittedRegressor model;
  model.kind = kind;
  model.n_features = x.cols();
  model.intercept = beta[0];
  model.coefficients.assign(x.cols(), 0.0);
  for (std::size_t j = 0; j < columns.size(); ++j)
    model.coefficients[static_cast<std::size_t>(columns[j])] = beta[j + 1];
  model.selected = columns;
  return model;
}

}  // namespace

FittedRegressor fit_ols(const Matrix& x, const Vector& y) {
  if (x.rows() != y.size())
    throw std::invalid_argument("fit_ols: row count mismatch");
  if (x.rows() == 0) throw std::invalid_argument("fit_ols: no training rows");
  std::vector<int> all(x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) all[j] = static_cast<int>(j);
  FittedRegressor model = fit_linear_on(x, y, all, RegressorKind::ols);
  model.selected.clear();  // OLS keeps everything; no selection to record
  return model;
}

FittedRegressor fit_stepwise(const Matrix& x, const Vector& y,
                             const StepwiseParams& params) {
  if (x.rows() != y.size())
    throw std::invalid_argument("fit_stepwise: row count mismatch");
  if (x.rows() < 2) throw std::invalid_argument("fit_stepwise: need at least 2 rows");

  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  const int max_steps =
      params.max_steps > 0 ? params.max_steps : static_cast<int>(d);

  std::vector<int> selected;
  std::vector<bool> used(d, false);

  // intercept-only start
  Matrix design = build_design(x, selected);
  Vector beta = solve_least_squares(design, y);
  double current_aic = aic_of(rss_of(design, beta, y), n, 1);

  while (static_cast<int>(selected.size()) < max_steps && selected.size() < d) {
    int best_feature = -1;
    double best_aic = current_aic;
    for (std::size_t j = 0; j < d; ++j) {
      if (used[j]) continue;
      std::vector<int> candidate = selected;
      candidate.push_back(static_cast<int>(j));
      const Matrix cd = build_design(x, candidate);
      const Vector cb = solve_least_squares(cd, y);
      const double aic = aic_of(rss_of(cd, cb, y), n, candidate.size() + 1);
      if (aic < best_aic) {  // strict: ties keep the lower-index feature
        best_aic = aic;
        best_feature = static_cast<int>(j);
      }
    }
    if (best_feature < 0) break;  // nothing improves AIC
    selected.push_back(best_feature);
    used[static_cast<std::size_t>(best_feature)] = true;
    current_aic = best_aic;
  }

  return fit_linear_on(x, y, selected, RegressorKind::stepwise);
}

}  // namespace msreg
