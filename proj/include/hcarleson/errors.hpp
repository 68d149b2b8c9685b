#pragma once

#include <stdexcept>
#include <string>

namespace hc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates the documented range of an operation.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A point or region lies outside the domain an operation is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// n < 2 or n above the compiled capacity.
class UnsupportedDimensionError : public Error {
 public:
  using Error::Error;
};

/// A requested computation would not converge (decay too slow for the weight)
/// or a verifier precondition failed.
class RejectedConfigurationError : public Error {
 public:
  using Error::Error;
};

/// An integrand produced a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// tw_fraction found no sample above the requested lower constant.
class CalibrationError : public Error {
 public:
  using Error::Error;
};

}  // namespace hc
