#include "uvlce/kernels.hpp"

namespace uvlce::kernels {

// Each output element is produced by one thread with the same inner-loop
// order as the serial reference, so parallel == serial exactly.

void matvec(const Matrix& m, const double* x, double* out) {
  const int rows = m.rows(), cols = m.cols();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < rows; ++i) out[i] = dot_n(m.row(i), x, cols);
}

void matvec_t(const Matrix& m, const double* v, double* out) {
  const int rows = m.rows(), cols = m.cols();
  const double* data = m.data();
#pragma omp parallel for schedule(static)
  for (int k = 0; k < cols; ++k) {
    double s = 0.0;
    for (int i = 0; i < rows; ++i) s += data[static_cast<std::size_t>(i) * cols + k] * v[i];
    out[k] = s;
  }
}

void soft_threshold(const double* r, int n, double tau, double* out) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) out[i] = soft_threshold_scalar(r[i], tau);
}

void outer_accumulate(const Matrix& a, const Matrix& b, Matrix& grad) {
  const int d = a.rows();
  const int rows = grad.rows(), cols = grad.cols();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < rows; ++i) {
    double* g = grad.row(i);
    for (int s = 0; s < d; ++s) {
      const double ai = a(s, i);
      if (ai == 0.0) continue;
      const double* bs = b.row(s);
      for (int j = 0; j < cols; ++j) g[j] += ai * bs[j];
    }
  }
}

}  // namespace uvlce::kernels
