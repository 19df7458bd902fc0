#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace esr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

/// A value that does not sit on the return lattice within tolerance.
class QuantizationError : public Error {
 public:
  using Error::Error;
};

class EmptyDistributionError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

/// Raised while validating an environment document. `path()` names the
/// offending field, e.g. `arms[2].outcomes`.
class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class ProbabilitySumError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class OffLatticeRewardError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DuplicateArmError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class EsrSetMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace esr
