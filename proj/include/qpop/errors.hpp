#pragma once

#include <stdexcept>
#include <string>

namespace qpop {

/// Bad user-supplied data: malformed CSV cells, dimension mismatches,
/// out-of-domain values in input files. CLI exit code 2.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical breakdown: degenerate covariance, failed factorization. CLI exit code 3.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration: unknown keys, out-of-range settings, unusable backend.
/// CLI exit code 4.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qpop
