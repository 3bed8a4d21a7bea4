#include "uvlce/linalg.hpp"

#include <cmath>

#include "uvlce/errors.hpp"
#include "uvlce/kernels.hpp"

namespace uvlce {

void cholesky_factor(Matrix& a) {
  const int n = a.rows();
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!(d > 0.0)) throw SingularSystem("non-positive pivot in Cholesky factorization");
    const double ljj = std::sqrt(d);
    a(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / ljj;
    }
  }
}

std::vector<double> cholesky_solve(const Matrix& chol, const std::vector<double>& b) {
  const int n = chol.rows();
  std::vector<double> x(b);
  for (int i = 0; i < n; ++i) {
    double s = x[i];
    for (int k = 0; k < i; ++k) s -= chol(i, k) * x[k];
    x[i] = s / chol(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int k = i + 1; k < n; ++k) s -= chol(k, i) * x[k];
    x[i] = s / chol(i, i);
  }
  return x;
}

std::vector<double> spd_solve_refined(const Matrix& a, const std::vector<double>& b) {
  Matrix chol = a;
  cholesky_factor(chol);
  std::vector<double> x = cholesky_solve(chol, b);
  // one refinement pass: solve A dx = b - A x
  const int n = a.rows();
  std::vector<double> r(n);
  kernels::serial::matvec(a, x.data(), r.data());
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
  const std::vector<double> dx = cholesky_solve(chol, r);
  for (int i = 0; i < n; ++i) x[i] += dx[i];
  return x;
}

}  // namespace uvlce
