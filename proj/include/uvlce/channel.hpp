#pragma once

#include <vector>

#include "uvlce/rng.hpp"

namespace uvlce {

// Quasi-linear attenuation fit: per-meter loss at frequency f is c1*f + c2.
struct AttenuationModel {
  double c1 = 0.0;  // slope, 1/(m*Hz)
  double c2 = 0.0;  // intercept, 1/m
};

// P equally spaced pilot subcarriers. Pilot i (1-based, i = 1..P) sits at
// f_min + i*spacing(), matching the row exponents of the observation matrix.
struct PilotGrid {
  double f_min = 0.0;
  double f_max = 0.0;
  int count = 0;

  double spacing() const { return (f_max - f_min) / (count - 1); }
  double frequency(int i) const { return f_min + i * spacing(); }
};

// Quantized distance axis: bins k = 0..size()-1 at distance k*step.
struct DistanceGrid {
  double step = 0.0;
  double s_max = 0.0;

  int size() const;
};

struct Path {
  double alpha = 0.0;     // dimensionless attenuation factor, > 0
  double distance = 0.0;  // meters
};

struct PathSet {
  std::vector<Path> paths;
};

struct ChannelGenConfig {
  int path_count = 6;
  double alpha_los_min = 0.5;
  double alpha_los_max = 1.0;
  double alpha_nlos_min = 0.05;
  double alpha_nlos_max = 0.5;
  bool off_grid = false;  // continuous distances (basis mismatch); default on-grid

  bool operator==(const ChannelGenConfig&) const = default;
};

using SparseProxy = std::vector<double>;

void validate(const PilotGrid& g);
void validate(const DistanceGrid& g);
void validate(const AttenuationModel& m, const PilotGrid& g);
void validate(const ChannelGenConfig& cfg, const DistanceGrid& dg);

// grid bin for a distance; tiny positive nudge guards against FP noise in the
// ratio when s is an exact multiple of the step
int quantize_index(double s, double step);

double attenuation_at(double f, const AttenuationModel& m);

// H(f) = sum_l alpha_l * exp(-(c1 f + c2) s_l)
double cfr_at(double f, const PathSet& ch, const AttenuationModel& m);

// CFR sampled at the P pilot frequencies
std::vector<double> sample_pilots(const PathSet& ch, const PilotGrid& g, const AttenuationModel& m);

// distance-domain sparse proxy: x_k = alpha_l * exp(-(c1 f_min + c2) k step)
// where k = quantize_index(s_l). Throws IndexCollision if two paths share a bin.
SparseProxy quantize_paths(const PathSet& ch, const DistanceGrid& dg, const PilotGrid& g,
                           const AttenuationModel& m);

// inverse of quantize_paths on its image; entries with |x_k| <= threshold are
// dropped, paths come out in increasing distance
PathSet reconstruct_paths(const SparseProxy& x, const DistanceGrid& dg, const PilotGrid& g,
                          const AttenuationModel& m, double threshold);

// L distinct grid distances drawn uniformly without replacement; the shortest
// one is the LoS path and gets the stronger amplitude range
PathSet random_channel(Rng& rng, const ChannelGenConfig& cfg, const DistanceGrid& dg);

}  // namespace uvlce
