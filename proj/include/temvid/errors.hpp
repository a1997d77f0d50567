#pragma once

#include <stdexcept>
#include <string>

namespace temvid {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad inputs, bad files, bad configuration. CLI maps these to exit code 2.
class ConfigError : public Error {
public:
  using Error::Error;
};

// Failures arising during computation. CLI maps these to exit code 3.
class NumericalError : public Error {
public:
  using Error::Error;
};

class EvenDimensionError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class NonFiniteError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class OutOfRangeError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class ShapeMismatchError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class WindowEmptyError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class ParseError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class IoError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class NonSpikingInputError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class DegenerateIntervalError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class InsufficientDataError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class DivisionByZeroError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

}  // namespace temvid
