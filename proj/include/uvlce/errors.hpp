#pragma once

#include <stdexcept>
#include <string>

namespace uvlce {

// Error taxonomy shared across the library. Everything derives from
// std::runtime_error so callers can catch broadly or by kind.

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error("ConfigError: " + msg) {}
};

struct IndexCollision : std::runtime_error {
  explicit IndexCollision(const std::string& msg) : std::runtime_error("IndexCollision: " + msg) {}
};

struct DimensionMismatch : std::runtime_error {
  explicit DimensionMismatch(const std::string& msg) : std::runtime_error("DimensionMismatch: " + msg) {}
};

struct DegenerateColumn : std::runtime_error {
  explicit DegenerateColumn(const std::string& msg) : std::runtime_error("DegenerateColumn: " + msg) {}
};

struct SingularSystem : std::runtime_error {
  explicit SingularSystem(const std::string& msg) : std::runtime_error("SingularSystem: " + msg) {}
};

struct NonFinite : std::runtime_error {
  explicit NonFinite(const std::string& msg) : std::runtime_error("NonFinite: " + msg) {}
};

struct ZeroTruth : std::runtime_error {
  explicit ZeroTruth(const std::string& msg) : std::runtime_error("ZeroTruth: " + msg) {}
};

struct ProvenanceMismatch : std::runtime_error {
  explicit ProvenanceMismatch(const std::string& msg) : std::runtime_error("ProvenanceMismatch: " + msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error("IoError: " + msg) {}
};

}  // namespace uvlce
