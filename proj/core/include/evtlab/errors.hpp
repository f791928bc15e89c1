#pragma once

#include <stdexcept>
#include <string>

namespace evtlab {

/// Root of every exception thrown by evtlab.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad dimension, bad schedule,
/// argument out of domain). The CLI maps these to exit code 2.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The computation itself failed (degenerate lattice, infinite observable,
/// too little tail data). The CLI maps these to exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

class InvalidFrame : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};
class InvalidFlow : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};
class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};
class InvalidSchedule : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};
class InvalidDimension : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};
class DomainError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};
class IndexOutOfRange : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};
class EmptyInput : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class DegenerateBasis : public NumericError {
 public:
  using NumericError::NumericError;
};
class InfiniteValue : public NumericError {
 public:
  using NumericError::NumericError;
};
class InsufficientTail : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Configuration file or command line inconsistency; carries the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace evtlab
