#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "uvlce/config.hpp"
#include "uvlce/dataset.hpp"

namespace uvlce {

// count i.i.d. samples: random_channel -> quantize_paths -> measure. Off-grid
// channels sample the true CFR instead (basis mismatch is the point there).
Dataset generate_dataset(const SystemConfig& cfg, int count, std::uint64_t seed);

// mean over samples of ||x - x_hat||^2 / ||x||^2
double nmse(const std::vector<std::vector<double>>& estimates,
            const std::vector<std::vector<double>>& truths);

enum class Scheme { ls, omp, amp, sl_uvce };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct SweepConfig {
  SystemConfig base;
  std::vector<int> values;  // pilot counts or path counts
  std::vector<Scheme> schemes = {Scheme::ls, Scheme::omp, Scheme::amp, Scheme::sl_uvce};
  bool timing = true;  // false records 0 seconds, for byte-reproducible reports
};

struct SweepRow {
  Scheme scheme;
  int sweep_value = 0;
  double nmse = 0.0;
  double seconds = 0.0;
  std::uint64_t seed = 0;
};

struct SweepReport {
  std::string sweep_variable;  // "pilot_count" or "path_count"
  std::vector<SweepRow> rows;
};

// Per sweep point: rebuild the matrix, regenerate train/test sets from
// point-derived seeds, train SL-UVCE fresh, and evaluate every scheme on the
// same test set. The LS ridge and the OMP stopping tolerance follow the
// defaults documented in the README.
SweepReport sweep_pilots(const SweepConfig& cfg);
SweepReport sweep_paths(const SweepConfig& cfg);

// schema: scheme,sweep_variable,sweep_value,nmse,seconds,seed
void write_csv(const SweepReport& report, std::ostream& out);

// default grids: P in {30..90 step 10} at L = 6; L in {2..12 step 2} at P = 64
std::vector<int> default_pilot_grid();
std::vector<int> default_path_grid();

// noise-matched OMP stopping tolerance for one measurement (Morozov rule):
// ||y|| * 10^(-snr/20); zero when noiseless
double omp_tolerance(const std::vector<double>& y, const NoiseSpec& noise);

}  // namespace uvlce
