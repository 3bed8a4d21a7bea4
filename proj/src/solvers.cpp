#include "uvlce/solvers.hpp"

#include <cmath>
#include <string>

#include "uvlce/errors.hpp"
#include "uvlce/kernels.hpp"
#include "uvlce/linalg.hpp"

namespace uvlce {

std::vector<double> soft_threshold(const std::vector<double>& r, double zeta, double sigma) {
  if (zeta < 0.0 || sigma < 0.0 || !std::isfinite(zeta) || !std::isfinite(sigma))
    throw ConfigError("soft threshold needs finite zeta, sigma >= 0");
  std::vector<double> out(r.size());
  kernels::soft_threshold(r.data(), static_cast<int>(r.size()), zeta * sigma, out.data());
  return out;
}

double default_ridge(const ObservationMatrix& phi) {
  const int p = phi.rows(), n = phi.cols();
  double tr = 0.0;
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < p; ++i) s += phi.entries(i, k) * phi.entries(i, k);
    tr += s;
  }
  return 1e-6 * tr / n;
}

namespace {

double residual_norm_of(const std::vector<double>& y, const ObservationMatrix& phi,
                        const std::vector<double>& x) {
  std::vector<double> yh(phi.rows());
  kernels::matvec(phi.entries, x.data(), yh.data());
  for (int i = 0; i < phi.rows(); ++i) yh[i] = y[i] - yh[i];
  return kernels::norm2(yh.data(), phi.rows());
}

}  // namespace

SolverResult ls_estimate(const std::vector<double>& y, const ObservationMatrix& phi, double ridge) {
  const int p = phi.rows(), n = phi.cols();
  if (static_cast<int>(y.size()) != p)
    throw DimensionMismatch("measurement length vs matrix rows");
  if (ridge < 0.0 || !std::isfinite(ridge)) throw ConfigError("ridge must be finite and >= 0");
  const Matrix& e = phi.entries;

  SolverResult res;
  if (p < n) {
    // dual form: x = Phi^T (Phi Phi^T + ridge I)^-1 y
    Matrix g(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = i; j < p; ++j) {
        const double v = kernels::dot_n(e.row(i), e.row(j), n);
        g(i, j) = v;
        g(j, i) = v;
      }
    for (int i = 0; i < p; ++i) g(i, i) += ridge;
    const std::vector<double> z = spd_solve_refined(g, y);
    res.x_hat.resize(n);
    kernels::matvec_t(e, z.data(), res.x_hat.data());
  } else {
    Matrix g(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double v = 0.0;
        for (int i = 0; i < p; ++i) v += e(i, j) * e(i, k);
        g(j, k) = v;
        g(k, j) = v;
      }
    for (int j = 0; j < n; ++j) g(j, j) += ridge;
    std::vector<double> rhs(n);
    kernels::matvec_t(e, y.data(), rhs.data());
    res.x_hat = spd_solve_refined(g, rhs);
  }
  res.iterations_used = 0;
  res.residual_norm = residual_norm_of(y, phi, res.x_hat);
  return res;
}

SolverResult omp_estimate(const std::vector<double>& y, const ObservationMatrix& phi,
                          const OmpConfig& cfg) {
  const int p = phi.rows(), n = phi.cols();
  if (static_cast<int>(y.size()) != p)
    throw DimensionMismatch("measurement length vs matrix rows");
  if (cfg.max_atoms < 1 || cfg.max_atoms > std::min(p, n))
    throw ConfigError("max_atoms must be in [1, min(P, N)]");
  if (cfg.residual_tol < 0.0) throw ConfigError("residual_tol must be >= 0");
  const Matrix& e = phi.entries;

  std::vector<double> colnorm(n);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < p; ++i) s += e(i, k) * e(i, k);
    colnorm[k] = std::sqrt(s);
    if (colnorm[k] == 0.0)
      throw DegenerateColumn("column " + std::to_string(k) + " has zero norm");
  }

  // conditioning floor: an atom whose novel component is at the per-sample
  // noise scale only injects amplified noise into the refit
  const double novel_floor = cfg.residual_tol / std::sqrt(static_cast<double>(p));

  std::vector<double> r(y);
  std::vector<std::vector<double>> q_cols;          // orthonormal basis of the span
  Matrix r_factor(cfg.max_atoms, cfg.max_atoms);    // upper-triangular MGS factor
  std::vector<int> support;
  std::vector<char> banned(n, 0);
  std::vector<double> cand(p), corr(n);

  while (static_cast<int>(support.size()) < cfg.max_atoms) {
    if (kernels::norm2(r.data(), p) <= cfg.residual_tol) break;

    kernels::matvec_t(e, r.data(), corr.data());
    bool accepted = false;
    for (;;) {
      // best remaining normalized correlation, ties to the smallest index
      int best = -1;
      double best_c = 0.0;
      for (int k = 0; k < n; ++k) {
        if (banned[k]) continue;
        const double c = std::fabs(corr[k]) / colnorm[k];
        if (c > best_c) {
          best_c = c;
          best = k;
        }
      }
      if (best < 0 || best_c == 0.0) break;

      // project the candidate out of the current span (MGS + reorthogonalize)
      for (int i = 0; i < p; ++i) cand[i] = e(i, best);
      const int m = static_cast<int>(q_cols.size());
      std::vector<double> proj(m, 0.0);
      for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j < m; ++j) {
          const double c = kernels::dot_n(q_cols[j].data(), cand.data(), p);
          proj[j] += c;
          for (int i = 0; i < p; ++i) cand[i] -= c * q_cols[j][i];
        }
      }
      const double novel = kernels::norm2(cand.data(), p);
      if (novel <= std::max(novel_floor, 1e-12 * colnorm[best])) {
        banned[best] = 1;  // numerically inside the span at the noise scale
        continue;
      }

      for (int j = 0; j < m; ++j) r_factor(j, m) = proj[j];
      r_factor(m, m) = novel;
      for (int i = 0; i < p; ++i) cand[i] /= novel;
      // residual stays the exact projection of y off the selected span
      const double rc = kernels::dot_n(cand.data(), r.data(), p);
      for (int i = 0; i < p; ++i) r[i] -= rc * cand[i];
      q_cols.push_back(cand);
      support.push_back(best);
      banned[best] = 1;
      accepted = true;
      break;
    }
    if (!accepted) break;
  }

  SolverResult res;
  res.x_hat.assign(n, 0.0);
  const int m = static_cast<int>(support.size());
  if (m > 0) {
    // back-substitute R coef = Q^T y
    std::vector<double> qty(m);
    for (int j = 0; j < m; ++j) qty[j] = kernels::dot_n(q_cols[j].data(), y.data(), p);
    for (int j = m - 1; j >= 0; --j) {
      double s = qty[j];
      for (int k = j + 1; k < m; ++k) s -= r_factor(j, k) * qty[k];
      qty[j] = s / r_factor(j, j);
    }
    for (int j = 0; j < m; ++j) res.x_hat[support[j]] = qty[j];
  }
  res.iterations_used = m;
  res.residual_norm = kernels::norm2(r.data(), p);
  return res;
}

SolverResult run_amp(const std::vector<double>& y, const ObservationMatrix& phi,
                     const AmpConfig& cfg, IterationTrace* trace) {
  const int p = phi.rows(), n = phi.cols();
  if (static_cast<int>(y.size()) != p)
    throw DimensionMismatch("measurement length vs matrix rows");
  if (cfg.iterations < 1) throw ConfigError("iterations must be >= 1");
  if (trace) trace->clear();

  std::vector<double> x(n, 0.0), v(p, 0.0), r(n), phix(p);
  const double sqrt_p = std::sqrt(static_cast<double>(p));

  for (int t = 1; t <= cfg.iterations; ++t) {
    const double b =
        (cfg.onsager && t > 1) ? kernels::count_above(x.data(), n, kSupportEps) / double(p) : 0.0;
    kernels::matvec(phi.entries, x.data(), phix.data());
    for (int i = 0; i < p; ++i) v[i] = y[i] - phix[i] + b * v[i];
    const double sigma = kernels::norm2(v.data(), p) / sqrt_p;
    kernels::matvec_t(phi.entries, v.data(), r.data());
    for (int k = 0; k < n; ++k) r[k] += x[k];
    const double tau = cfg.fixed_threshold ? *cfg.fixed_threshold : cfg.zeta * sigma;
    kernels::soft_threshold(r.data(), n, tau, x.data());
    if (!kernels::all_finite(v.data(), p) || !kernels::all_finite(x.data(), n))
      throw NonFinite("AMP iterate diverged at iteration " + std::to_string(t));
    if (trace) trace->push_back({v, sigma, r, x, b});
  }

  SolverResult res;
  res.x_hat = x;
  res.iterations_used = cfg.iterations;
  res.residual_norm = residual_norm_of(y, phi, x);
  return res;
}

}  // namespace uvlce
