#include <cmath>
#include <vector>

#include "doctest.h"
#include "msreg/least_squares.hpp"
#include "test_support.hpp"

using namespace msreg;

namespace {

// Independent reference: form the normal equations A^T A x = A^T b and solve
// them by Gaussian elimination with partial pivoting. Numerically inferior to
// QR but entirely different code, which is the point. Only valid for
// well-conditioned full-rank systems.
Vector normal_equations_solve(const Matrix& a, const Vector& b) {
  const std::size_t n = a.rows(), d = a.cols();
  std::vector<std::vector<double>> g(d, std::vector<double>(d + 1, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r) s += a(r, i) * a(r, j);
      g[i][j] = s;
    }
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) s += a(r, i) * b[r];
    g[i][d] = s;
  }
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < d; ++r)
      if (std::fabs(g[r][col]) > std::fabs(g[pivot][col])) pivot = r;
    std::swap(g[col], g[pivot]);
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col) continue;
      double f = g[r][col] / g[col][col];
      for (std::size_t c = col; c <= d; ++c) g[r][c] -= f * g[col][c];
    }
  }
  Vector x(d);
  for (std::size_t i = 0; i < d; ++i) x[i] = g[i][d] / g[i][i];
  return x;
}

Vector residual(const Matrix& a, const Vector& x, const Vector& b) {
  Vector r(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    r[i] = s - b[i];
  }
  return r;
}

double norm(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("QR solution agrees with the normal-equations reference") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 20 + rng.below(41);
    std::size_t d = 1 + rng.below(8);
    Matrix a = testutil::random_matrix(n, d, rng.next());
    Vector b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = 2.0 * rng.unit() - 1.0;

    Vector got = solve_least_squares(a, b);
    Vector want = normal_equations_solve(a, b);
    REQUIRE(got.size() == d);
    double scale = std::max(1.0, norm(want));
    for (std::size_t j = 0; j < d; ++j)
      CHECK(std::fabs(got[j] - want[j]) / scale < 1e-8);
  }
}

TEST_CASE("consistent systems are solved exactly") {
  Rng rng(57);
  Matrix a = testutil::random_matrix(30, 5, 4001);
  Vector x0 = {1.5, -2.0, 0.25, 3.0, -0.75};
  Vector b(30, 0.0);
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t j = 0; j < 5; ++j) b[i] += a(i, j) * x0[j];

  int rank = -1;
  Vector got = solve_least_squares(a, b, 1e-10, &rank);
  CHECK(rank == 5);
  for (std::size_t j = 0; j < 5; ++j)
    CHECK(got[j] == doctest::Approx(x0[j]).epsilon(1e-9));
}

TEST_CASE("square invertible system") {
  Matrix a = Matrix::from_rows({{2, 1}, {1, 3}});
  Vector b = {5, 10};
  Vector x = solve_least_squares(a, b);
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(3.0));
}

TEST_CASE("duplicated columns share the weight (minimum-norm solution)") {
  // a rank-deficient design: third column repeats the first
  Rng rng(73);
  Matrix a(40, 3);
  Vector b(40);
  for (std::size_t i = 0; i < 40; ++i) {
    double u = 2.0 * rng.unit() - 1.0;
    double v = 2.0 * rng.unit() - 1.0;
    a(i, 0) = u;
    a(i, 1) = v;
    a(i, 2) = u;
    b[i] = 3.0 * u - v + 0.01 * rng.gaussian();
  }
  int rank = -1;
  Vector x = solve_least_squares(a, b, 1e-10, &rank);
  CHECK(rank == 2);
  // the null space is e0 - e2; minimum norm forces equality of the two weights
  CHECK(x[0] == doctest::Approx(x[2]).epsilon(1e-9));
  CHECK(x[0] + x[2] == doctest::Approx(3.0).epsilon(0.05));

  // the residual still matches the equivalent full-rank two-column solve
  Matrix reduced(40, 2);
  for (std::size_t i = 0; i < 40; ++i) {
    reduced(i, 0) = a(i, 0);
    reduced(i, 1) = a(i, 1);
  }
  Vector xr = solve_least_squares(reduced, b);
  CHECK(norm(residual(a, x, b)) ==
        doctest::Approx(norm(residual(reduced, xr, b))).epsilon(1e-9));
}

TEST_CASE("least-squares residual is orthogonal to the column space") {
  Rng rng(91);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 15 + rng.below(20);
    std::size_t d = 2 + rng.below(5);
    Matrix a = testutil::random_matrix(n, d, rng.next());
    // make it rank deficient half the time
    if (trial % 2 == 0 && d >= 2)
      for (std::size_t i = 0; i < n; ++i) a(i, d - 1) = 2.0 * a(i, 0);
    Vector b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = rng.gaussian();

    Vector x = solve_least_squares(a, b);
    Vector r = residual(a, x, b);
    for (std::size_t j = 0; j < d; ++j) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += a(i, j) * r[i];
      CHECK(std::fabs(dot) < 1e-8 * std::max(1.0, norm(b)) * std::sqrt(double(n)));
    }
  }
}

TEST_CASE("underdetermined systems get the minimum-norm interpolant") {
  // x1 + x3 = 2, x2 + x4 = 4; minimum norm splits each evenly
  Matrix a = Matrix::from_rows({{1, 0, 1, 0}, {0, 1, 0, 1}});
  Vector b = {2, 4};
  Vector x = solve_least_squares(a, b);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(x[2] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(x[3] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("zero matrix yields the zero solution") {
  Matrix a(5, 3, 0.0);
  Vector b = {1, 2, 3, 4, 5};
  int rank = -1;
  Vector x = solve_least_squares(a, b, 1e-10, &rank);
  CHECK(rank == 0);
  CHECK(x == Vector{0, 0, 0});
}

TEST_CASE("near-dependent column is cut at the rank tolerance") {
  Matrix a(20, 2);
  Rng rng(12);
  for (std::size_t i = 0; i < 20; ++i) {
    a(i, 0) = rng.gaussian();
    a(i, 1) = a(i, 0) * (1.0 + 1e-13);  // far below the 1e-10 cutoff
  }
  Vector b(20);
  for (std::size_t i = 0; i < 20; ++i) b[i] = a(i, 0);
  int rank = -1;
  Vector x = solve_least_squares(a, b, 1e-10, &rank);
  CHECK(rank == 1);
  CHECK(std::isfinite(x[0]));
  CHECK(std::isfinite(x[1]));
}

TEST_CASE("mixed column scales stay accurate") {
  Rng rng(44);
  Matrix a(50, 3);
  for (std::size_t i = 0; i < 50; ++i) {
    a(i, 0) = rng.gaussian();
    a(i, 1) = 1e3 * rng.gaussian();
    a(i, 2) = 1e-3 * rng.gaussian();
  }
  Vector x0 = {2.0, 0.003, 500.0};
  Vector b(50);
  for (std::size_t i = 0; i < 50; ++i)
    b[i] = a(i, 0) * x0[0] + a(i, 1) * x0[1] + a(i, 2) * x0[2];
  Vector x = solve_least_squares(a, b);
  CHECK(x[0] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(x[1] == doctest::Approx(0.003).epsilon(1e-8));
  CHECK(x[2] == doctest::Approx(500.0).epsilon(1e-8));
}
