#pragma once

#include <span>

namespace msreg {

// mean absolute error between aligned prediction/truth vectors
double mae(std::span<const double> predictions, std::span<const double> truth);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  int dof = 0;
  // all differences exactly zero: the comparison is vacuous and reports
  // render "--" instead of a number
  bool degenerate = false;
};

// Two-tailed paired t-test on aligned per-instance absolute errors:
// d_i = a_i - b_i, t = mean(d) sqrt(n) / sd(d), p from Student's t with
// n - 1 degrees of freedom. sd = 0 with nonzero mean gives p = 0.
TTestResult paired_ttest(std::span<const double> errors_a,
                         std::span<const double> errors_b);

// P(T <= t) for Student's t with dof degrees of freedom
double student_t_cdf(double t, int dof);

// I_x(a, b), the regularized incomplete beta function (continued fraction)
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace msreg
