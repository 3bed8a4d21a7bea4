#pragma once

#include <vector>

#include "uvlce/matrix.hpp"

namespace uvlce {

// Cholesky factorization of a symmetric positive definite matrix, in place
// (lower triangle). Throws SingularSystem when a pivot is not strictly
// positive.
void cholesky_factor(Matrix& a);

// Solves L L^T x = b given the factor from cholesky_factor.
std::vector<double> cholesky_solve(const Matrix& chol, const std::vector<double>& b);

// Convenience: factor + solve + one step of iterative refinement against the
// original matrix (the normal matrices here can be badly conditioned).
std::vector<double> spd_solve_refined(const Matrix& a, const std::vector<double>& b);

}  // namespace uvlce
