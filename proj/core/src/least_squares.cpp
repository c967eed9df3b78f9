#include "msreg/least_squares.hpp"

#include <cmath>
#include <stdexcept>

namespace msreg {

namespace {

// Householder vector for column segment v[0..len): returns (alpha, tau)
// and overwrites v with the reflector, so H = I - tau * v v^T maps the
// segment onto alpha * e_0.
struct Reflector {
  double alpha = 0.0;
  double tau = 0.0;
};

Reflector make_reflector(double* v, std::size_t len) {
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < len; ++i) norm_sq += v[i] * v[i];
  const double norm = std::sqrt(norm_sq);
  Reflector h;
  if (norm == 0.0) return h;  // zero column: nothing to reflect
  h.alpha = v[0] >= 0.0 ? -norm : norm;  // sign choice avoids cancellation
  v[0] -= h.alpha;
  double vsq = 0.0;
  for (std::size_t i = 0; i < len; ++i) vsq += v[i] * v[i];
  h.tau = vsq == 0.0 ? 0.0 : 2.0 / vsq;
  return h;
}

}  // namespace

Vector solve_least_squares(const Matrix& a, const Vector& b, double rank_tol,
                           int* rank_out) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != m)
    throw std::invalid_argument("solve_least_squares: dimension mismatch");
  if (m == 0 || n == 0)
    throw std::invalid_argument("solve_least_squares: empty system");

  Matrix r = a;       // factored in place
  Vector qtb = b;     // accumulates Q^T b
  std::vector<std::size_t> perm(n);
  for (std::size_t j = 0; j < n; ++j) perm[j] = j;

  const std::size_t kmax = m < n ? m : n;
  std::vector<double> v(m);
  std::size_t rank = 0;
  double r00 = 0.0;

  for (std::size_t j = 0; j < kmax; ++j) {
    // column pivoting: bring the column with the largest remaining norm to
    // position j (fresh norms; the classic downdating recurrence can drift)
    std::size_t pivot = j;
    double best = -1.0;
    for (std::size_t c = j; c < n; ++c) {
      double s = 0.0;
      for (std::size_t i = j; i < m; ++i) s += r(i, c) * r(i, c);
      if (s > best) {
        best = s;
        pivot = c;
      }
    }
    if (pivot != j) {
      for (std::size_t i = 0; i < m; ++i) std::swap(r(i, j), r(i, pivot));
      std::swap(perm[j], perm[pivot]);
    }

    const std::size_t len = m - j;
    for (std::size_t i = 0; i < len; ++i) v[i] = r(j + i, j);
    const Reflector h = make_reflector(v.data(), len);

    r(j, j) = h.alpha;
    for (std::size_t i = j + 1; i < m; ++i) r(i, j) = 0.0;

    if (h.tau != 0.0) {
      for (std::size_t c = j + 1; c < n; ++c) {
        double s = 0.0;
        for (std::size_t i = 0; i < len; ++i) s += v[i] * r(j + i, c);
        s *= h.tau;
        for (std::size_t i = 0; i < len; ++i) r(j + i, c) -= s * v[i];
      }
      double s = 0.0;
      for (std::size_t i = 0; i < len; ++i) s += v[i] * qtb[j + i];
      s *= h.tau;
      for (std::size_t i = 0; i < len; ++i) qtb[j + i] -= s * v[i];
    }

    if (j == 0) r00 = std::fabs(r(0, 0));
    if (std::fabs(r(j, j)) <= rank_tol * r00) break;
    ++rank;
  }

  if (rank_out) *rank_out = static_cast<int>(rank);

  Vector x(n, 0.0);
  if (rank == 0) return x;  // all-zero matrix: minimum-norm answer is 0

  Vector xp(n, 0.0);  // solution in pivoted coordinates
  if (rank == n) {
    // full column rank: ordinary back substitution on R z = Q^T b
    for (std::size_t j = n; j-- > 0;) {
      double s = qtb[j];
      for (std::size_t c = j + 1; c < n; ++c) s -= r(j, c) * xp[c];
      xp[j] = s / r(j, j);
    }
  } else {
    // Rank-deficient: the top block B = R[0..rank, 0..n) has full row rank.
    // Factor B^T = Q2 R2 (unpivoted); then B = R2^T Q2^T, so solving the
    // lower-triangular system R2^T w = Q^T b and mapping u = Q2 [w; 0]
    // gives the minimum-norm solution of B u = Q^T b.
    Matrix bt(n, rank);
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t c = 0; c < n; ++c) bt(c, i) = r(i, c);

    std::vector<Vector> reflectors(rank);
    std::vector<double> taus(rank);
    for (std::size_t j = 0; j < rank; ++j) {
      const std::size_t len = n - j;
      Vector& w = reflectors[j];
      w.resize(len);
      for (std::size_t i = 0; i < len; ++i) w[i] = bt(j + i, j);
      const Reflector h = make_reflector(w.data(), len);
      taus[j] = h.tau;
      bt(j, j) = h.alpha;
      for (std::size_t i = j + 1; i < n; ++i) bt(i, j) = 0.0;
      if (h.tau != 0.0) {
        for (std::size_t c = j + 1; c < rank; ++c) {
          double s = 0.0;
          for (std::size_t i = 0; i < len; ++i) s += w[i] * bt(j + i, c);
          s *= h.tau;
          for (std::size_t i = 0; i < len; ++i) bt(j + i, c) -= s * w[i];
        }
      }
    }

    // forward substitution on R2^T (lower triangular, entries bt(c, i))
    Vector w(rank, 0.0);
    for (std::size_t i = 0; i < rank; ++i) {
      double s = qtb[i];
      for (std::size_t c = 0; c < i; ++c) s -= bt(c, i) * w[c];
      w[i] = s / bt(i, i);
    }

    // u = Q2 [w; 0]: apply stored reflectors in reverse order
    for (std::size_t i = 0; i < rank; ++i) xp[i] = w[i];
    for (std::size_t j = rank; j-- > 0;) {
      if (taus[j] == 0.0) continue;
      const Vector& refl = reflectors[j];
      const std::size_t len = n - j;
      double s = 0.0;
      for (std::size_t i = 0; i < len; ++i) s += refl[i] * xp[j + i];
      s *= taus[j];
      for (std::size_t i = 0; i < len; ++i) xp[j + i] -= s * refl[i];
    }
  }

  for (std::size_t j = 0; j < n; ++j) x[perm[j]] = xp[j];
  return x;
}

}  // namespace msreg
