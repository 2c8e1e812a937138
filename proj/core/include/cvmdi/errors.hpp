#pragma once

#include <stdexcept>
#include <string>

namespace cvmdi {

// A caller-supplied physical parameter is outside its admissible range
// (negative variance, transmissivity above one, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Structurally malformed request: repeated mode index, index out of range,
// matrix with the wrong shape.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Arithmetic left its domain: unphysical covariance, non-positive variance
// under a measurement, failed decomposition.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An assembled covariance matrix lacks the block structure it must have.
// Always indicates a circuit-assembly bug rather than bad user input.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cvmdi
