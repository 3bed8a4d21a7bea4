#include "uvlce/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "uvlce/errors.hpp"

namespace uvlce {

int DistanceGrid::size() const {
  const double q = s_max / step;
  const double r = std::round(q);
  if (std::fabs(q - r) < 1e-9 * std::max(1.0, r)) return static_cast<int>(r);
  return static_cast<int>(std::ceil(q));
}

void validate(const PilotGrid& g) {
  if (g.count < 2) throw ConfigError("pilot count must be >= 2, got " + std::to_string(g.count));
  if (!(g.f_max > g.f_min)) throw ConfigError("pilot band requires f_max > f_min");
}

void validate(const DistanceGrid& g) {
  if (!(g.step > 0.0)) throw ConfigError("distance step must be > 0");
  if (!(g.s_max > 0.0)) throw ConfigError("s_max must be > 0");
}

void validate(const AttenuationModel& m, const PilotGrid& g) {
  if (m.c1 < 0.0) throw ConfigError("attenuation slope c1 must be >= 0");
  if (!(m.c2 > 0.0)) throw ConfigError("attenuation intercept c2 must be > 0");
  // loss must stay positive over the whole pilot band
  if (attenuation_at(g.frequency(1), m) <= 0.0 || attenuation_at(g.frequency(g.count), m) <= 0.0)
    throw ConfigError("c1*f + c2 must be positive across the pilot band");
}

void validate(const ChannelGenConfig& cfg, const DistanceGrid& dg) {
  if (cfg.path_count < 1) throw ConfigError("path count must be >= 1");
  if (cfg.path_count >= dg.size())
    throw ConfigError("path count " + std::to_string(cfg.path_count) +
                      " does not fit the distance grid of size " + std::to_string(dg.size()));
  if (!(cfg.alpha_los_min > 0.0) || cfg.alpha_los_max < cfg.alpha_los_min ||
      !(cfg.alpha_nlos_min > 0.0) || cfg.alpha_nlos_max < cfg.alpha_nlos_min)
    throw ConfigError("amplitude ranges must satisfy 0 < min <= max");
}

int quantize_index(double s, double step) {
  return static_cast<int>(std::floor(s / step + 1e-9));
}

double attenuation_at(double f, const AttenuationModel& m) { return m.c1 * f + m.c2; }

double cfr_at(double f, const PathSet& ch, const AttenuationModel& m) {
  const double a = attenuation_at(f, m);
  double h = 0.0;
  for (const Path& p : ch.paths) h += p.alpha * std::exp(-a * p.distance);
  return h;
}

std::vector<double> sample_pilots(const PathSet& ch, const PilotGrid& g, const AttenuationModel& m) {
  std::vector<double> y(g.count);
  for (int i = 1; i <= g.count; ++i) y[i - 1] = cfr_at(g.frequency(i), ch, m);
  return y;
}

SparseProxy quantize_paths(const PathSet& ch, const DistanceGrid& dg, const PilotGrid& g,
                           const AttenuationModel& m) {
  const int n = dg.size();
  const double rate = attenuation_at(g.f_min, m);  // c1*f_min + c2
  SparseProxy x(n, 0.0);
  for (const Path& p : ch.paths) {
    if (p.distance < 0.0 || p.distance > dg.s_max)
      throw ConfigError("path distance outside [0, s_max]");
    int k = quantize_index(p.distance, dg.step);
    if (k >= n) k = n - 1;  // s == s_max on an exactly divisible grid
    if (x[k] != 0.0)
      throw IndexCollision("two paths quantize to grid bin " + std::to_string(k) +
                           " (step too coarse)");
    x[k] = p.alpha * std::exp(-rate * k * dg.step);
  }
  return x;
}

PathSet reconstruct_paths(const SparseProxy& x, const DistanceGrid& dg, const PilotGrid& g,
                          const AttenuationModel& m, double threshold) {
  if (threshold < 0.0) throw ConfigError("reconstruction threshold must be >= 0");
  const double rate = attenuation_at(g.f_min, m);
  PathSet ch;
  for (int k = 0; k < static_cast<int>(x.size()); ++k) {
    if (std::fabs(x[k]) > threshold)
      ch.paths.push_back({x[k] * std::exp(rate * k * dg.step), k * dg.step});
  }
  return ch;
}

PathSet random_channel(Rng& rng, const ChannelGenConfig& cfg, const DistanceGrid& dg) {
  validate(cfg, dg);
  const int n = dg.size();
  const int l = cfg.path_count;
  std::vector<int> bins(l);

  if (!cfg.off_grid) {
    // partial Fisher-Yates over the bin indices
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (int j = 0; j < l; ++j) {
      const int pick = j + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n - j)));
      std::swap(pool[j], pool[pick]);
      bins[j] = pool[j];
    }
    std::sort(bins.begin(), bins.end());
    PathSet ch;
    ch.paths.resize(l);
    for (int j = 0; j < l; ++j) ch.paths[j].distance = bins[j] * dg.step;
    ch.paths[0].alpha = rng.uniform(cfg.alpha_los_min, cfg.alpha_los_max);
    for (int j = 1; j < l; ++j) ch.paths[j].alpha = rng.uniform(cfg.alpha_nlos_min, cfg.alpha_nlos_max);
    return ch;
  }

  // off-grid: continuous distances, redrawn until no two share a bin
  std::vector<double> dist(l);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    for (int j = 0; j < l; ++j) dist[j] = rng.uniform(0.0, dg.s_max);
    std::sort(dist.begin(), dist.end());
    for (int j = 0; j < l; ++j) bins[j] = quantize_index(dist[j], dg.step);
    if (std::adjacent_find(bins.begin(), bins.end()) == bins.end()) {
      PathSet ch;
      ch.paths.resize(l);
      for (int j = 0; j < l; ++j) ch.paths[j].distance = dist[j];
      ch.paths[0].alpha = rng.uniform(cfg.alpha_los_min, cfg.alpha_los_max);
      for (int j = 1; j < l; ++j)
        ch.paths[j].alpha = rng.uniform(cfg.alpha_nlos_min, cfg.alpha_nlos_max);
      return ch;
    }
  }
  throw ConfigError("could not draw collision-free off-grid distances; grid too coarse for L");
}

}  // namespace uvlce
