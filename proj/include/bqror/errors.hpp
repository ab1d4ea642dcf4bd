#pragma once

#include <stdexcept>
#include <string>

namespace bqror {

/// Invalid distribution or sampler parameter (nonpositive scale, empty interval, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input violates a model-level domain constraint (ordering, dimensions).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Linear algebra or optimisation failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problem with ingested data (missing column, non-numeric cell, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A series with zero variance was handed to a diagnostic that divides by it.
class DegenerateSeries : public std::runtime_error {
 public:
  DegenerateSeries() : std::runtime_error("degenerate series") {}
};

}  // namespace bqror
