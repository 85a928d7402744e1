#pragma once

#include <stdexcept>
#include <string>

namespace hullcap {

/// Bad input: shape mismatch, violated precondition, malformed config.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative solve or numerical procedure did not deliver a usable result.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The computational box is too small: the solution reached the padding band.
class DomainTooSmall : public SolverError {
 public:
  using SolverError::SolverError;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace hullcap
