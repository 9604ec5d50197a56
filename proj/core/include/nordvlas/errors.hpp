#pragma once

#include <stdexcept>
#include <string>

namespace nordvlas {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or violated precondition detected before a run.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A point left the region where the lattice stencils are defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appeared in a field or particle state.
class BlowUpError : public Error {
 public:
  using Error::Error;
};

/// Requested time is not covered by the recorded history.
class HistoryError : public Error {
 public:
  using Error::Error;
};

/// A numerical quadrature did not reach its tolerance.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

}  // namespace nordvlas
