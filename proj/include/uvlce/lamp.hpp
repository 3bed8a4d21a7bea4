#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "uvlce/dataset.hpp"
#include "uvlce/matrix.hpp"
#include "uvlce/solvers.hpp"

namespace uvlce {

// One unfolded layer: linear map back to the distance domain plus the
// threshold gain. A fresh layer is exactly (Phi^T, 1).
struct LampLayer {
  Matrix b;           // N x P
  double zeta = 1.0;  // > 0
};

struct LampParams {
  std::vector<LampLayer> layers;
  MatrixProvenance provenance;

  int depth() const { return static_cast<int>(layers.size()); }
};

LampParams untrained_params(const ObservationMatrix& phi, int depth);

// Forward pass through all layers; identical recursion to run_amp except for
// the per-layer (B_t, zeta_t). Throws NonFinite on divergence.
std::vector<double> lamp_forward(const std::vector<double>& y, const ObservationMatrix& phi,
                                 const LampParams& params, IterationTrace* trace = nullptr);

// provenance-checked forward pass
std::vector<double> lamp_infer(const std::vector<double>& y, const ObservationMatrix& phi,
                               const LampParams& params);

// mean over the dataset of ||x_hat(y) - x||_2^2
double dataset_loss(const LampParams& params, const ObservationMatrix& phi, const Dataset& data);

// Gradient of one sample's squared error through the last layer only
// (earlier layers frozen; sigma and the Onsager coefficient are forward
// constants). `last` is the final IterationState of the forward trace.
struct LayerGradient {
  Matrix d_b;       // N x P
  double d_zeta = 0.0;
};

LayerGradient layer_gradients(const IterationState& last, const std::vector<double>& x_true,
                              double zeta);

struct AdamConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<double> m, v;
  long step = 0;

  explicit AdamState(int n = 0) : m(n, 0.0), v(n, 0.0) {}
};

// standard bias-corrected Adam update, in place
void adam_step(double* param, const double* grad, int n, AdamState& state, const AdamConfig& cfg);

enum class StopMetric { train_loss, holdout_loss };

struct TrainConfig {
  int train_size = 1000;  // D
  int test_size = 100;    // S
  AdamConfig adam;
  int epochs_per_layer = 200;
  int batch_size = 50;
  int max_layers = 8;
  int snapshot_every = 10;  // epochs between stop-metric evaluations
  StopMetric stop_metric = StopMetric::holdout_loss;
  std::uint64_t seed = 1;
};

enum class StopReason { probe_worse, max_layers, zero_loss };

struct LayerRecord {
  int layer = 0;               // 1-based
  double metric_init = 0.0;    // stop metric of the freshly appended layer
  double metric_end = 0.0;     // stop metric of the retained parameters
  double train_loss = 0.0;     // dataset_loss on the training set, retained params
  double holdout_loss = 0.0;
};

struct TrainResult {
  LampParams params;
  std::vector<LayerRecord> history;  // one record per retained layer
  StopReason stop_reason = StopReason::max_layers;
  int probe_layer = 0;          // the discarded layer index when probe_worse
  double probe_metric = 0.0;    // its (worse) stop metric
};

// layer, epoch (1-based), full-train-set loss, holdout NMSE
using EpochCallback = std::function<void(int, int, double, double)>;

// Grows the network one layer at a time: each layer starts at (Phi^T, 1), is
// optimized alone with minibatch Adam, and the best snapshot by the stop
// metric (the initial point included) is retained. Growth stops when a probe
// layer fails to improve the metric, at max_layers, or at an exactly zero
// metric.
TrainResult train_layerwise(const Dataset& train, const Dataset& holdout,
                            const ObservationMatrix& phi, const TrainConfig& cfg,
                            const EpochCallback& per_epoch = nullptr);

// floor applied to zeta after every update; a non-positive threshold gain is
// meaningless
inline constexpr double kZetaFloor = 1e-6;

}  // namespace uvlce
