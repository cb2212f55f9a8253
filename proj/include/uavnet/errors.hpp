#pragma once

#include <stdexcept>
#include <string>

namespace uavnet {

/// Scenario file / override parsing failures (CLI exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Quadrature, series or solver failures (CLI exit code 3).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem failures (CLI exit code 4).
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace uavnet
