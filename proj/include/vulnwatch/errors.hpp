#pragma once

#include <stdexcept>
#include <string>

namespace vulnwatch {

/// Bad configuration or usage (CLI exit code 1).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (CLI exit code 2).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A remote dependency (scorer, NVD, stream) failed permanently (CLI exit code 3).
struct ExternalServiceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace vulnwatch
