#pragma once

#include "msreg/matrix.hpp"

namespace msreg {

// Solves min ||A x - b||_2; when A is rank deficient, returns the solution
// of minimum Euclidean norm. Householder QR with column pivoting determines
// the numerical rank (|R_jj| <= rank_tol * |R_00| cuts it off); a second,
// unpivoted QR of the leading block's transpose completes the orthogonal
// decomposition for the rank-deficient case. Tiny clusters routinely give
// designs with more columns than rows, so erroring is not an option here.
Vector solve_least_squares(const Matrix& a, const Vector& b,
                           double rank_tol = 1e-10, int* rank_out = nullptr);

}  // namespace msreg
