#pragma once

#include <stdexcept>
#include <string>

namespace qstatic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violated a documented constraint (parameter ordering, probability
/// range, normalization, density-matrix validity).
class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

/// A result that should hold by construction did not (e.g. a trace with a
/// non-negligible imaginary part). Indicates a bug or corrupted input.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace qstatic
