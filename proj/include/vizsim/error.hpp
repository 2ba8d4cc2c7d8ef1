#pragma once

#include <stdexcept>
#include <string>

namespace vizsim {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// File access or codec failure; message names the offending path.
class IoError : public Error {
  public:
    using Error::Error;
};

/// Shape mismatch between operands (planes, images, vectors).
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// Value outside the mathematical domain of an operation
/// (undefined ratios, out-of-range parameters, infeasible pyramids).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Invalid configuration or malformed input file.
class ConfigError : public Error {
  public:
    using Error::Error;
};

}  // namespace vizsim
