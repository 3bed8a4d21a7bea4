#include "uvlce/eval.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include "uvlce/errors.hpp"
#include "uvlce/io.hpp"
#include "uvlce/kernels.hpp"

namespace uvlce {

Dataset generate_dataset(const SystemConfig& cfg, int count, std::uint64_t seed) {
  if (count < 1) throw ConfigError("dataset size must be >= 1");
  const ObservationMatrix phi = build_matrix(cfg);
  validate(cfg.gen, cfg.grid);

  Dataset ds;
  ds.provenance = {phi.provenance, cfg.noise.snr_db, cfg.gen, seed};
  ds.y.reserve(count);
  ds.x.reserve(count);
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    const PathSet ch = random_channel(rng, cfg.gen, cfg.grid);
    SparseProxy x = quantize_paths(ch, cfg.grid, cfg.pilots, cfg.attenuation);
    std::vector<double> y;
    if (cfg.gen.off_grid) {
      // measure the true CFR so the grid mismatch actually shows up in y
      y = add_noise(sample_pilots(ch, cfg.pilots, cfg.attenuation), cfg.noise, rng);
    } else {
      y = measure(phi, x, cfg.noise, rng);
    }
    ds.x.push_back(std::move(x));
    ds.y.push_back(std::move(y));
  }
  return ds;
}

double nmse(const std::vector<std::vector<double>>& estimates,
            const std::vector<std::vector<double>>& truths) {
  if (estimates.empty() || estimates.size() != truths.size())
    throw DimensionMismatch("estimate/truth lists must be nonempty and matched");
  double total = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (estimates[i].size() != truths[i].size())
      throw DimensionMismatch("estimate/truth length mismatch at sample " + std::to_string(i));
    const int n = static_cast<int>(truths[i].size());
    const double ref = kernels::norm2sq(truths[i].data(), n);
    if (ref == 0.0) throw ZeroTruth("sample " + std::to_string(i) + " has zero-norm truth");
    double err = 0.0;
    for (int k = 0; k < n; ++k) {
      const double d = estimates[i][k] - truths[i][k];
      err += d * d;
    }
    total += err / ref;
  }
  return total / static_cast<double>(truths.size());
}

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::ls: return "ls";
    case Scheme::omp: return "omp";
    case Scheme::amp: return "amp";
    case Scheme::sl_uvce: return "sl-uvce";
  }
  return "?";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "ls") return Scheme::ls;
  if (name == "omp") return Scheme::omp;
  if (name == "amp") return Scheme::amp;
  if (name == "sl-uvce") return Scheme::sl_uvce;
  throw ConfigError("unknown scheme '" + name + "' (expected ls|omp|amp|sl-uvce)");
}

double omp_tolerance(const std::vector<double>& y, const NoiseSpec& noise) {
  if (noise.noiseless()) return 0.0;
  return kernels::norm2(y.data(), static_cast<int>(y.size())) *
         std::pow(10.0, -noise.snr_db / 20.0);
}

std::vector<int> default_pilot_grid() { return {30, 40, 50, 60, 70, 80, 90}; }
std::vector<int> default_path_grid() { return {2, 4, 6, 8, 10, 12}; }

namespace {

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

SweepReport run_sweep(const SweepConfig& cfg, bool over_pilots) {
  SweepReport report;
  report.sweep_variable = over_pilots ? "pilot_count" : "path_count";
  if (cfg.values.empty()) throw ConfigError("sweep needs at least one value");

  const std::uint64_t variable_tag = over_pilots ? 0x70696c6f : 0x70617468;
  for (const int value : cfg.values) {
    SystemConfig point = cfg.base;
    if (over_pilots)
      point.pilots.count = value;
    else
      point.gen.path_count = value;
    // every scheme at this point sees the same data, derived from a
    // point-specific seed stream
    point.seed = derive_seed(derive_seed(cfg.base.seed, variable_tag),
                             static_cast<std::uint64_t>(value));

    const ObservationMatrix phi = build_matrix(point);
    const Dataset train = generate_dataset(point, point.train.train_size, train_data_seed(point));
    const Dataset test = generate_dataset(point, point.train.test_size, test_data_seed(point));

    for (const Scheme scheme : cfg.schemes) {
      const double t0 = now_seconds();
      std::vector<std::vector<double>> estimates;
      estimates.reserve(test.size());
      switch (scheme) {
        case Scheme::ls: {
          const double ridge = default_ridge(phi);
          for (const auto& y : test.y) estimates.push_back(ls_estimate(y, phi, ridge).x_hat);
          break;
        }
        case Scheme::omp: {
          OmpConfig oc;
          oc.max_atoms = point.gen.path_count;  // oracle-favorable: the true L
          for (const auto& y : test.y) {
            oc.residual_tol = omp_tolerance(y, point.noise);
            estimates.push_back(omp_estimate(y, phi, oc).x_hat);
          }
          break;
        }
        case Scheme::amp: {
          const AmpConfig ac = {10, 1.0, true, std::nullopt};
          for (const auto& y : test.y) estimates.push_back(run_amp(y, phi, ac).x_hat);
          break;
        }
        case Scheme::sl_uvce: {
          TrainConfig tc = point.train;
          tc.seed = optimizer_seed(point);
          const TrainResult trained = train_layerwise(train, test, phi, tc);
          for (const auto& y : test.y) estimates.push_back(lamp_infer(y, phi, trained.params));
          break;
        }
      }
      SweepRow row;
      row.scheme = scheme;
      row.sweep_value = value;
      row.nmse = nmse(estimates, test.x);
      row.seconds = cfg.timing ? now_seconds() - t0 : 0.0;
      row.seed = point.seed;
      report.rows.push_back(row);
    }
  }
  return report;
}

}  // namespace

SweepReport sweep_pilots(const SweepConfig& cfg) { return run_sweep(cfg, true); }

SweepReport sweep_paths(const SweepConfig& cfg) { return run_sweep(cfg, false); }

void write_csv(const SweepReport& report, std::ostream& out) {
  out << "scheme,sweep_variable,sweep_value,nmse,seconds,seed\n";
  for (const SweepRow& r : report.rows) {
    out << scheme_name(r.scheme) << ',' << report.sweep_variable << ',' << r.sweep_value << ','
        << fmt_double(r.nmse, 9) << ',' << fmt_double(r.seconds, 9) << ',' << r.seed << '\n';
  }
}

}  // namespace uvlce
