#pragma once

#include <limits>
#include <vector>

#include "uvlce/channel.hpp"
#include "uvlce/matrix.hpp"
#include "uvlce/rng.hpp"

namespace uvlce {

// Parameters an observation matrix (and everything derived from it) was built
// from. Estimators trained against one matrix refuse to run against another.
struct MatrixProvenance {
  double c1 = 0.0;
  double c2 = 0.0;
  double f_min = 0.0;
  double f_max = 0.0;
  int pilot_count = 0;
  double step = 0.0;
  double s_max = 0.0;

  bool operator==(const MatrixProvenance&) const = default;

  PilotGrid pilot_grid() const { return {f_min, f_max, pilot_count}; }
  DistanceGrid distance_grid() const { return {step, s_max}; }
  AttenuationModel attenuation() const { return {c1, c2}; }
};

// P x N matrix with entry(i,k) = base[k]^i, base[k] = exp(-c1 df step k),
// rows i = 1..P. Column 0 is all ones; every column is a geometric sequence.
struct ObservationMatrix {
  Matrix entries;
  std::vector<double> base;
  MatrixProvenance provenance;

  int rows() const { return entries.rows(); }
  int cols() const { return entries.cols(); }
};

struct NoiseSpec {
  double snr_db = std::numeric_limits<double>::infinity();  // +inf = noiseless

  bool noiseless() const { return snr_db == std::numeric_limits<double>::infinity(); }
};

ObservationMatrix build_observation_matrix(const PilotGrid& g, const DistanceGrid& dg,
                                           const AttenuationModel& m);

// clean + AWGN with variance set so 10 log10(||clean||^2 / E||w||^2) = snr_db;
// noiseless specs do not consume the rng
std::vector<double> add_noise(const std::vector<double>& clean, const NoiseSpec& n, Rng& rng);

// y = Phi x + w
std::vector<double> measure(const ObservationMatrix& phi, const SparseProxy& x, const NoiseSpec& n,
                            Rng& rng);

// max_{j != k} |<phi_j, phi_k>| / (||phi_j|| ||phi_k||)
double mutual_incoherence(const ObservationMatrix& phi);

}  // namespace uvlce
