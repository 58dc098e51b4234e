#pragma once

#include <stdexcept>
#include <string>

namespace popper {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A physically meaningless or infeasible request (CLI exit status 1).
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidPacket : public DomainError {
 public:
  using DomainError::DomainError;
};

class InvalidMode : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The lens width-continuity condition has no positive real waist.
class NoRealWaist : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Observed pattern narrower than the diffraction minimum for the distance.
class DiffractionLimit : public DomainError {
 public:
  using DomainError::DomainError;
};

class InconsistentCalibration : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed configuration or scenario (CLI exit status 2).
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Optical arm layout the pipeline cannot evaluate.
class PipelineError : public ConfigError {
 public:
  explicit PipelineError(const std::string& message) : ConfigError("", message) {}
};

/// Numerical grid cannot represent the requested state.
class GridError : public Error {
 public:
  using Error::Error;
};

class ResolutionError : public GridError {
 public:
  using GridError::GridError;
};

class ExtentTooSmall : public GridError {
 public:
  using GridError::GridError;
};

}  // namespace popper
