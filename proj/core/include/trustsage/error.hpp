#pragma once

#include <stdexcept>
#include <string>

namespace trustsage {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input files, invalid configuration values, bad node ids.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A well-formed request the pipeline refuses to serve, e.g. a training set
/// with fewer than two examples of a class.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// NaN or infinity showed up in a numeric routine.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace trustsage
