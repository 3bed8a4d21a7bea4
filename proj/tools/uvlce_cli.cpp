// Command-line front end: dataset generation, training, estimation,
// experiment sweeps, and observation-matrix diagnostics.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uvlce/errors.hpp"
#include "uvlce/eval.hpp"
#include "uvlce/io.hpp"

namespace {

uvlce::SystemConfig load_config(const std::string& path, std::optional<std::uint64_t> seed) {
  uvlce::SystemConfig cfg =
      path.empty() ? uvlce::default_config() : uvlce::read_config_file(path);
  if (seed) cfg.seed = *seed;
  return cfg;
}

std::vector<uvlce::Scheme> parse_schemes(const std::string& csv) {
  std::vector<uvlce::Scheme> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(uvlce::scheme_from_name(item));
  if (out.empty()) throw uvlce::ConfigError("no schemes given");
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"sparse underwater visible-light channel estimation"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool verbose = false;
  app.add_option("--config", config_path, "key=value config file (defaults when omitted)");
  app.add_option("--seed", seed, "override the config seed");
  app.add_flag("--verbose", verbose, "progress output on stderr");

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "generate a dataset file");
  std::string gen_out, gen_role = "train";
  int gen_count = -1;
  gen->add_option("--out", gen_out, "output dataset path")->required();
  gen->add_option("--role", gen_role, "train|test: picks size and seed stream")
      ->check(CLI::IsMember({"train", "test"}));
  gen->add_option("--count", gen_count, "sample count override");

  // ---- train ----
  auto* train = app.add_subcommand("train", "train the unfolded estimator layer-wise");
  std::string train_train, train_test, train_out, train_log;
  train->add_option("--train", train_train, "training dataset file")->required();
  train->add_option("--test", train_test, "held-out dataset file")->required();
  train->add_option("--out", train_out, "checkpoint output path")->required();
  train->add_option("--log", train_log, "per-epoch CSV log path");

  // ---- estimate ----
  auto* est = app.add_subcommand("estimate", "estimate a channel from a measurement file");
  std::string est_in, est_out, est_scheme = "sl-uvce", est_ckpt;
  double est_threshold = 1e-6;
  int est_atoms = -1;
  double est_ridge = -1.0;
  int est_iters = 10;
  double est_zeta = 1.0;
  est->add_option("--in", est_in, "measurement file")->required();
  est->add_option("--out", est_out, "estimate output path")->required();
  est->add_option("--scheme", est_scheme, "ls|omp|amp|sl-uvce")
      ->check(CLI::IsMember({"ls", "omp", "amp", "sl-uvce"}));
  est->add_option("--checkpoint", est_ckpt, "trained checkpoint (required for sl-uvce)");
  est->add_option("--threshold", est_threshold, "path reconstruction threshold");
  est->add_option("--k", est_atoms, "OMP atom budget (default: config path count)");
  est->add_option("--ridge", est_ridge, "LS ridge (default: 1e-6 trace/N)");
  est->add_option("--iterations", est_iters, "AMP iteration count");
  est->add_option("--zeta", est_zeta, "AMP threshold gain");

  // ---- sweep ----
  auto* sweep = app.add_subcommand("sweep", "NMSE sweep over pilot or path count");
  std::string sweep_var = "pilots", sweep_values, sweep_schemes = "ls,omp,amp,sl-uvce",
              sweep_out;
  bool no_timing = false;
  sweep->add_option("--sweep", sweep_var, "pilots|paths")
      ->check(CLI::IsMember({"pilots", "paths"}));
  sweep->add_option("--values", sweep_values, "comma-separated sweep values");
  sweep->add_option("--schemes", sweep_schemes, "comma-separated scheme list");
  sweep->add_option("--out", sweep_out, "report CSV path")->required();
  sweep->add_flag("--no-timing", no_timing, "record 0 seconds (byte-reproducible reports)");

  // ---- diagnose ----
  auto* diag = app.add_subcommand("diagnose", "print observation-matrix diagnostics");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    const uvlce::SystemConfig cfg = load_config(config_path, seed);
    const bool is_train = gen_role == "train";
    const int count =
        gen_count > 0 ? gen_count : (is_train ? cfg.train.train_size : cfg.train.test_size);
    const std::uint64_t ds_seed =
        is_train ? uvlce::train_data_seed(cfg) : uvlce::test_data_seed(cfg);
    const uvlce::Dataset ds = uvlce::generate_dataset(cfg, count, ds_seed);
    uvlce::write_dataset_file(ds, gen_out);
    if (verbose)
      std::cerr << "wrote " << ds.size() << " samples to " << gen_out << "\n";
    return 0;
  }

  if (train->parsed()) {
    const uvlce::SystemConfig cfg = load_config(config_path, seed);
    const uvlce::Dataset tr = uvlce::read_dataset_file(train_train);
    const uvlce::Dataset te = uvlce::read_dataset_file(train_test);
    if (!tr.provenance.compatible_with(te.provenance))
      throw uvlce::ProvenanceMismatch("train/test dataset provenances differ");
    if (!(tr.provenance.matrix == uvlce::matrix_provenance(cfg)))
      throw uvlce::ProvenanceMismatch("datasets do not match the configured observation matrix");
    const uvlce::ObservationMatrix phi = uvlce::build_matrix(cfg);

    uvlce::TrainConfig tc = cfg.train;
    tc.seed = uvlce::optimizer_seed(cfg);
    std::ofstream log;
    uvlce::EpochCallback cb;
    if (!train_log.empty()) {
      log.open(train_log);
      if (!log) throw uvlce::IoError("cannot open '" + train_log + "' for writing");
      uvlce::write_training_log_header(log);
      cb = [&log](int layer, int epoch, double loss, double nm) {
        uvlce::write_training_log_row(log, layer, epoch, loss, nm);
      };
    }
    const uvlce::TrainResult result = uvlce::train_layerwise(tr, te, phi, tc, cb);
    uvlce::save_checkpoint({result.params, tc}, train_out);
    if (verbose) {
      std::cerr << "trained depth " << result.params.depth() << "; layer metrics:";
      for (const auto& rec : result.history) std::cerr << ' ' << rec.metric_end;
      std::cerr << "\n";
    }
    return 0;
  }

  if (est->parsed()) {
    const uvlce::SystemConfig cfg = load_config(config_path, seed);
    const uvlce::Measurement m = uvlce::read_measurement_file(est_in);
    if (!(m.provenance == uvlce::matrix_provenance(cfg)))
      throw uvlce::ProvenanceMismatch("measurement does not match the configured matrix");
    const uvlce::ObservationMatrix phi = uvlce::build_matrix(cfg);

    std::vector<double> x_hat;
    if (est_scheme == "ls") {
      x_hat = uvlce::ls_estimate(m.y, phi, est_ridge >= 0 ? est_ridge : uvlce::default_ridge(phi))
                  .x_hat;
    } else if (est_scheme == "omp") {
      uvlce::OmpConfig oc;
      oc.max_atoms = est_atoms > 0 ? est_atoms : cfg.gen.path_count;
      oc.residual_tol = uvlce::omp_tolerance(m.y, cfg.noise);
      x_hat = uvlce::omp_estimate(m.y, phi, oc).x_hat;
    } else if (est_scheme == "amp") {
      x_hat = uvlce::run_amp(m.y, phi, {est_iters, est_zeta, true, std::nullopt}).x_hat;
    } else {
      if (est_ckpt.empty())
        throw uvlce::ConfigError("scheme sl-uvce needs --checkpoint");
      const uvlce::Checkpoint ckpt = uvlce::load_checkpoint(est_ckpt);
      x_hat = uvlce::lamp_infer(m.y, phi, ckpt.params);
    }

    uvlce::Estimate e;
    e.x_hat = x_hat;
    e.paths = uvlce::reconstruct_paths(x_hat, cfg.grid, cfg.pilots, cfg.attenuation,
                                       est_threshold);
    e.provenance = phi.provenance;
    e.scheme = est_scheme;
    uvlce::write_estimate_file(e, est_out);
    if (verbose)
      std::cerr << est_scheme << " estimate with " << e.paths.paths.size() << " paths -> "
                << est_out << "\n";
    return 0;
  }

  if (sweep->parsed()) {
    uvlce::SweepConfig sc;
    sc.base = load_config(config_path, seed);
    sc.schemes = parse_schemes(sweep_schemes);
    sc.timing = !no_timing;
    const bool pilots = sweep_var == "pilots";
    if (sweep_values.empty()) {
      sc.values = pilots ? uvlce::default_pilot_grid() : uvlce::default_path_grid();
    } else {
      std::stringstream ss(sweep_values);
      std::string item;
      while (std::getline(ss, item, ',')) sc.values.push_back(std::stoi(item));
    }
    const uvlce::SweepReport report = pilots ? uvlce::sweep_pilots(sc) : uvlce::sweep_paths(sc);
    std::ofstream out(sweep_out);
    if (!out) throw uvlce::IoError("cannot open '" + sweep_out + "' for writing");
    uvlce::write_csv(report, out);
    out.flush();
    if (!out) throw uvlce::IoError("failed writing '" + sweep_out + "'");
    if (verbose) std::cerr << report.rows.size() << " report rows -> " << sweep_out << "\n";
    return 0;
  }

  if (diag->parsed()) {
    const uvlce::SystemConfig cfg = load_config(config_path, seed);
    const uvlce::ObservationMatrix phi = uvlce::build_matrix(cfg);
    const double mu = uvlce::mutual_incoherence(phi);
    double min_entry = 1.0, min_norm = 0.0, max_norm = 0.0;
    for (int k = 0; k < phi.cols(); ++k) {
      double s = 0.0;
      for (int i = 0; i < phi.rows(); ++i) {
        s += phi.entries(i, k) * phi.entries(i, k);
        min_entry = std::min(min_entry, phi.entries(i, k));
      }
      s = std::sqrt(s);
      if (k == 0) min_norm = max_norm = s;
      min_norm = std::min(min_norm, s);
      max_norm = std::max(max_norm, s);
    }
    std::cout << "observation matrix: " << phi.rows() << " x " << phi.cols()
              << ", mutual incoherence " << uvlce::fmt_double(mu, 9) << "\n";
    std::cout << "rows=" << phi.rows() << "\n";
    std::cout << "cols=" << phi.cols() << "\n";
    std::cout << "mu=" << uvlce::fmt_double(mu, 9) << "\n";
    std::cout << "min_entry=" << uvlce::fmt_double(min_entry, 9) << "\n";
    std::cout << "min_col_norm=" << uvlce::fmt_double(min_norm, 9) << "\n";
    std::cout << "max_col_norm=" << uvlce::fmt_double(max_norm, 9) << "\n";
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
