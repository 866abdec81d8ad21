#pragma once

#include <stdexcept>
#include <string>

namespace dualmarg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejected inputs: malformed graphs/params/files, violated preconditions,
// enumeration budget overruns. CLI exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Failures of the numerics themselves: degenerate partition functions,
// DFT real-truncation overflow, non-convergent quadrature. CLI exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace dualmarg
