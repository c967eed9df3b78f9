#include "msreg/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace msreg {

double mae(std::span<const double> predictions, std::span<const double> truth) {
  if (predictions.size() != truth.size())
    throw std::invalid_argument("mae: length mismatch");
  if (predictions.empty()) throw std::invalid_argument("mae: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i)
    s += std::fabs(predictions[i] - truth[i]);
  return s / static_cast<double>(predictions.size());
}

namespace {

// Lentz's continued fraction for the incomplete beta function; converges in
// a handful of iterations for the x < (a+1)/(a+b+2) regime it is called in.
double incomplete_beta_cf(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 3e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const int m2 = 2 * m;
    double coef = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + coef * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + coef / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    coef = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + coef * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + coef / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < eps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0)
    throw std::invalid_argument("regularized_incomplete_beta: a, b must be > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * incomplete_beta_cf(a, b, x) / a;
  return 1.0 - front * incomplete_beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, int dof) {
  if (dof < 1) throw std::invalid_argument("student_t_cdf: dof must be >= 1");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double v = static_cast<double>(dof);
  const double x = v / (v + t * t);
  const double tail = 0.5 * regularized_incomplete_beta(0.5 * v, 0.5, x);
  return t >= 0.0 ? 1.0 - tail : tail;
}

TTestResult paired_ttest(std::span<const double> errors_a,
                         std::span<const double> errors_b) {
  if (errors_a.size() != errors_b.size())
    throw std::invalid_argument("paired_ttest: length mismatch");
  const std::size_t n = errors_a.size();
  if (n < 2) throw std::invalid_argument("paired_ttest: need at least 2 pairs");

  double mean_d = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean_d += errors_a[i] - errors_b[i];
  mean_d /= static_cast<double>(n);

  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dev = (errors_a[i] - errors_b[i]) - mean_d;
    ss += dev * dev;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  TTestResult result;
  result.dof = static_cast<int>(n) - 1;
  if (sd == 0.0) {
    if (mean_d == 0.0) {
      result.degenerate = true;  // identical errors: render "--"
      result.t = 0.0;
      result.p = 1.0;
    } else {
      result.t = mean_d > 0 ? std::numeric_limits<double>::infinity()
                            : -std::numeric_limits<double>::infinity();
      result.p = 0.0;
    }
    return result;
  }

  result.t = mean_d * std::sqrt(static_cast<double>(n)) / sd;
  const double upper_tail = 1.0 - student_t_cdf(std::fabs(result.t), result.dof);
  result.p = 2.0 * upper_tail;
  if (result.p > 1.0) result.p = 1.0;
  return result;
}

}  // namespace msreg
