#pragma once

#include <cstdint>

#include "uvlce/channel.hpp"
#include "uvlce/lamp.hpp"
#include "uvlce/sensing.hpp"

namespace uvlce {

// Complete experiment configuration; the config file is its one source of
// truth (CLI flags may override scalar fields).
struct SystemConfig {
  AttenuationModel attenuation;
  PilotGrid pilots;
  DistanceGrid grid;
  ChannelGenConfig gen;
  NoiseSpec noise;
  std::uint64_t seed = 1;
  TrainConfig train;
};

// Desk-scale defaults: 12 m grid at 0.1 m steps (N = 120), 64 pilots over a
// 30 MHz band starting at DC, 6 paths, 30 dB SNR. The attenuation slope is
// set so that c1 * df * ds = 1.5e-2 at these defaults, which keeps adjacent
// grid columns of the observation matrix distinguishable at this noise level
// while the matrix stays strongly coherent overall.
SystemConfig default_config();

MatrixProvenance matrix_provenance(const SystemConfig& cfg);
ObservationMatrix build_matrix(const SystemConfig& cfg);

// disjoint seed streams for the train/test datasets and the optimizer
std::uint64_t train_data_seed(const SystemConfig& cfg);
std::uint64_t test_data_seed(const SystemConfig& cfg);
std::uint64_t optimizer_seed(const SystemConfig& cfg);

}  // namespace uvlce
