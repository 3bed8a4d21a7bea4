#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "uvlce/config.hpp"
#include "uvlce/dataset.hpp"
#include "uvlce/lamp.hpp"

namespace uvlce {

// locale-independent float formatting/parsing (to_chars/from_chars); 17
// significant digits round-trip doubles exactly
std::string fmt_double(double v, int precision = 17);
double parse_double(const std::string& text);

// ---- config files: '#' comments and key=value lines ----
SystemConfig read_config(std::istream& in);
SystemConfig read_config_file(const std::string& path);
void write_config(const SystemConfig& cfg, std::ostream& out);
void write_config_file(const SystemConfig& cfg, const std::string& path);

// ---- dataset files: provenance header + one CSV row per sample ----
void write_dataset(const Dataset& ds, std::ostream& out);
void write_dataset_file(const Dataset& ds, const std::string& path);
Dataset read_dataset(std::istream& in);
Dataset read_dataset_file(const std::string& path);

// ---- measurement files: provenance header + a single y row ----
struct Measurement {
  std::vector<double> y;
  MatrixProvenance provenance;
};

void write_measurement(const Measurement& m, std::ostream& out);
void write_measurement_file(const Measurement& m, const std::string& path);
Measurement read_measurement(std::istream& in);
Measurement read_measurement_file(const std::string& path);

// ---- estimate files: x_hat row plus the reconstructed path list ----
struct Estimate {
  std::vector<double> x_hat;
  PathSet paths;
  MatrixProvenance provenance;
  std::string scheme;
};

void write_estimate(const Estimate& e, std::ostream& out);
void write_estimate_file(const Estimate& e, const std::string& path);

// ---- checkpoints: versioned little-endian binary, bit-exact round trip ----
struct Checkpoint {
  LampParams params;
  TrainConfig train;
};

void save_checkpoint(const Checkpoint& c, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

// ---- per-epoch training log ----
void write_training_log_header(std::ostream& out);
void write_training_log_row(std::ostream& out, int layer, int epoch, double train_loss,
                            double test_nmse);

}  // namespace uvlce
