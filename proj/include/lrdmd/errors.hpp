#ifndef LRDMD_ERRORS_HPP
#define LRDMD_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lrdmd {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Empty, non-finite or shape-inconsistent input.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Requested rank outside [1, m].
class InvalidRank : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Operator factors that violate a structural precondition.
class InvalidOperator : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// The nonsymmetric eigensolver did not converge or failed its residual check.
class EigFailure : public Error {
 public:
  using Error::Error;
};

// Left and right spectra could not be matched one to one.
class PairingFailure : public Error {
 public:
  using Error::Error;
};

// NaN or Inf appeared while time stepping.
class SimulationBlowup : public Error {
 public:
  SimulationBlowup(std::size_t step, const std::string& what)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

// Malformed or unreadable files.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lrdmd

#endif
