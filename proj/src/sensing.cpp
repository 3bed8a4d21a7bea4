#include "uvlce/sensing.hpp"

#include <cmath>
#include <string>

#include "uvlce/errors.hpp"
#include "uvlce/kernels.hpp"

namespace uvlce {

ObservationMatrix build_observation_matrix(const PilotGrid& g, const DistanceGrid& dg,
                                           const AttenuationModel& m) {
  validate(g);
  validate(dg);
  validate(m, g);
  const int p = g.count;
  const int n = dg.size();
  if (p < 1 || n < 1) throw ConfigError("observation matrix needs P >= 1 and N >= 1");

  ObservationMatrix out;
  out.base.resize(n);
  for (int k = 0; k < n; ++k) out.base[k] = std::exp(-m.c1 * g.spacing() * dg.step * k);

  out.entries = Matrix(p, n);
  for (int k = 0; k < n; ++k) {
    double v = out.base[k];
    for (int i = 0; i < p; ++i) {  // row i holds base^(i+1)
      out.entries(i, k) = v;
      v *= out.base[k];
    }
  }
  out.provenance = {m.c1, m.c2, g.f_min, g.f_max, p, dg.step, dg.s_max};
  return out;
}

std::vector<double> add_noise(const std::vector<double>& clean, const NoiseSpec& n, Rng& rng) {
  if (n.noiseless()) return clean;
  if (!std::isfinite(n.snr_db)) throw ConfigError("snr_db must be finite or +inf");
  const int p = static_cast<int>(clean.size());
  const double power = kernels::norm2sq(clean.data(), p);
  const double sigma = std::sqrt(power * std::pow(10.0, -n.snr_db / 10.0) / p);
  std::vector<double> y(clean);
  for (int i = 0; i < p; ++i) y[i] += sigma * rng.gaussian();
  return y;
}

std::vector<double> measure(const ObservationMatrix& phi, const SparseProxy& x, const NoiseSpec& n,
                            Rng& rng) {
  if (static_cast<int>(x.size()) != phi.cols())
    throw DimensionMismatch("proxy length " + std::to_string(x.size()) + " vs matrix with " +
                            std::to_string(phi.cols()) + " columns");
  std::vector<double> clean(phi.rows());
  kernels::matvec(phi.entries, x.data(), clean.data());
  return add_noise(clean, n, rng);
}

double mutual_incoherence(const ObservationMatrix& phi) {
  const int p = phi.rows(), n = phi.cols();
  const Matrix& e = phi.entries;
  std::vector<double> colnorm(n);
  std::vector<double> col(p);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < p; ++i) s += e(i, k) * e(i, k);
    colnorm[k] = std::sqrt(s);
    if (colnorm[k] == 0.0)
      throw DegenerateColumn("column " + std::to_string(k) + " has zero norm");
  }
  double mu = 0.0;
#pragma omp parallel for schedule(static) reduction(max : mu)
  for (int j = 0; j < n; ++j) {
    double local = 0.0;
    for (int k = j + 1; k < n; ++k) {
      double ip = 0.0;
      for (int i = 0; i < p; ++i) ip += e(i, j) * e(i, k);
      const double c = std::fabs(ip) / (colnorm[j] * colnorm[k]);
      if (c > local) local = c;
    }
    if (local > mu) mu = local;
  }
  return mu;
}

}  // namespace uvlce
