// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace krb {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// theta vector length does not match the affine arity J.
class ArityMismatch : public Error {
public:
  using Error::Error;
};

/// Reduced (or dense) system is singular to working precision.
class SingularReducedSystem : public Error {
public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
public:
  using Error::Error;
};

class SingularMatrix : public Error {
public:
  using Error::Error;
};

/// Parameter outside the admissible domain of a theta map.
class ThetaDomainError : public Error {
public:
  using Error::Error;
};

/// Multi-instance builder produced a rank-0 basis.
class EmptyModel : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

// Persistence failures are distinguished so callers can react per kind.
class ManifestError : public IoError {
public:
  using IoError::IoError;
};

class PayloadSizeMismatch : public IoError {
public:
  using IoError::IoError;
};

class HashMismatch : public IoError {
public:
  using IoError::IoError;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace krb
