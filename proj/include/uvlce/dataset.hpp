#pragma once

#include <cstdint>
#include <vector>

#include "uvlce/sensing.hpp"

namespace uvlce {

// Everything a (y, x) sample set depends on. Two datasets are compatible for
// training when they differ only in the seed.
struct DatasetProvenance {
  MatrixProvenance matrix;
  double snr_db = 0.0;
  ChannelGenConfig gen;
  std::uint64_t seed = 0;

  bool operator==(const DatasetProvenance&) const = default;

  bool compatible_with(const DatasetProvenance& other) const {
    return matrix == other.matrix && snr_db == other.snr_db && gen == other.gen;
  }
};

struct Dataset {
  std::vector<std::vector<double>> y;  // measurement vectors, length P
  std::vector<std::vector<double>> x;  // ground-truth sparse proxies, length N
  DatasetProvenance provenance;

  int size() const { return static_cast<int>(y.size()); }
};

}  // namespace uvlce
