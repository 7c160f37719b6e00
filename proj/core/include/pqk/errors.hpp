#pragma once

#include <stdexcept>
#include <string>

namespace pqk {

// Each category maps onto one CLI exit code (see tools/pqk.cpp).

/// Invalid configuration, flags, or parameter values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested simulation backend cannot handle the circuit size.
class BackendInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure (singular system, non-finite values).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pqk
