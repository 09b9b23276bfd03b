#pragma once

#include <stdexcept>
#include <string>

namespace hypembed {

/// Invalid input to a geometric primitive (boundary point, dimension mismatch).
class GeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or inconsistent input data (files, datasets, affinity matrices).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration values.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hypembed
