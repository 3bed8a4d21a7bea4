#include "uvlce/config.hpp"

namespace uvlce {

SystemConfig default_config() {
  SystemConfig cfg;
  cfg.pilots = {0.0, 30e6, 64};
  cfg.grid = {0.1, 12.0};
  // slope from the column-coherence product c1 * df * ds = 1.5e-2
  const double df = cfg.pilots.spacing();
  cfg.attenuation = {1.5e-2 / (df * cfg.grid.step), 0.15};
  cfg.gen = {};
  cfg.noise = {30.0};
  cfg.seed = 1;
  cfg.train = {};
  return cfg;
}

MatrixProvenance matrix_provenance(const SystemConfig& cfg) {
  return {cfg.attenuation.c1, cfg.attenuation.c2, cfg.pilots.f_min, cfg.pilots.f_max,
          cfg.pilots.count,   cfg.grid.step,      cfg.grid.s_max};
}

ObservationMatrix build_matrix(const SystemConfig& cfg) {
  return build_observation_matrix(cfg.pilots, cfg.grid, cfg.attenuation);
}

std::uint64_t train_data_seed(const SystemConfig& cfg) { return derive_seed(cfg.seed, 0x7261696e); }
std::uint64_t test_data_seed(const SystemConfig& cfg) { return derive_seed(cfg.seed, 0x74657374); }
std::uint64_t optimizer_seed(const SystemConfig& cfg) { return derive_seed(cfg.seed, 0x6f707469); }

}  // namespace uvlce
