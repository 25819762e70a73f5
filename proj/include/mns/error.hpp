#pragma once

#include <stdexcept>
#include <string>

namespace mns {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two operands live on different grids.
class GridMismatch : public Error {
 public:
  GridMismatch() : Error("grid mismatch between operands") {}
};

/// Operand is in the wrong (physical/spectral) representation.
class RepresentationError : public Error {
 public:
  using Error::Error;
};

/// NaN or Inf encountered where finite data is required.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mns
