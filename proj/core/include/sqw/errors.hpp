#pragma once

#include <stdexcept>
#include <string>

namespace sqw {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: validation failures the caller can fix.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class NegativeTime : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class MismatchedGrids : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class DriveDomainError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// The numbers went somewhere they should not.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ZeroQuadraticNorm : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DivergentIntegral : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DivergentKernel : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class KernelNotNormalizable : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ExtentTooSmall : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BlowUp : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TailDivergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace sqw
