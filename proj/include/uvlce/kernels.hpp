#pragma once

#include <cmath>
#include <cstddef>

#include "uvlce/matrix.hpp"

namespace uvlce::kernels {

// Data-parallel kernels used by the solvers and the network. The OpenMP
// variants assign each output element to exactly one thread with a fixed
// sequential inner loop, so results are bit-identical to the serial
// reference for any thread count. Reductions needing a fixed summation
// order (dot, norm) stay sequential; they are cheap at the sizes involved.

inline double dot_n(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline double norm2sq(const double* a, int n) { return dot_n(a, a, n); }

inline double norm2(const double* a, int n) { return std::sqrt(norm2sq(a, n)); }

inline double soft_threshold_scalar(double r, double tau) {
  const double a = std::fabs(r) - tau;
  return a > 0.0 ? std::copysign(a, r) : 0.0;
}

namespace serial {

// out = M x
inline void matvec(const Matrix& m, const double* x, double* out) {
  for (int i = 0; i < m.rows(); ++i) out[i] = dot_n(m.row(i), x, m.cols());
}

// out = M^T v
inline void matvec_t(const Matrix& m, const double* v, double* out) {
  const int rows = m.rows(), cols = m.cols();
  const double* data = m.data();
  for (int k = 0; k < cols; ++k) {
    double s = 0.0;
    for (int i = 0; i < rows; ++i) s += data[static_cast<std::size_t>(i) * cols + k] * v[i];
    out[k] = s;
  }
}

inline void soft_threshold(const double* r, int n, double tau, double* out) {
  for (int i = 0; i < n; ++i) out[i] = soft_threshold_scalar(r[i], tau);
}

// grad += sum_d coeff[d] (per row) outer products: grad(i,j) += sum_d a(d,i) * b(d,j)
inline void outer_accumulate(const Matrix& a, const Matrix& b, Matrix& grad) {
  const int d = a.rows();
  for (int i = 0; i < grad.rows(); ++i) {
    double* g = grad.row(i);
    for (int s = 0; s < d; ++s) {
      const double ai = a(s, i);
      if (ai == 0.0) continue;
      const double* bs = b.row(s);
      for (int j = 0; j < grad.cols(); ++j) g[j] += ai * bs[j];
    }
  }
}

}  // namespace serial

void matvec(const Matrix& m, const double* x, double* out);
void matvec_t(const Matrix& m, const double* v, double* out);
void soft_threshold(const double* r, int n, double tau, double* out);
void outer_accumulate(const Matrix& a, const Matrix& b, Matrix& grad);

// count of entries with |x_i| > eps (the support size used for the Onsager term)
inline int count_above(const double* x, int n, double eps) {
  int c = 0;
  for (int i = 0; i < n; ++i)
    if (std::fabs(x[i]) > eps) ++c;
  return c;
}

inline bool all_finite(const double* x, int n) {
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(x[i])) return false;
  return true;
}

}  // namespace uvlce::kernels
