#pragma once

#include <stdexcept>
#include <string>

namespace caplab {

// Coarse error classes; the CLI maps them to exit codes.
enum class ErrorKind {
  InvalidInput,    // bad config, malformed expression, out-of-range parameter
  Tolerance,       // quadrature or root finding failed to converge
  Admissibility,   // the reaction term violates the structural hypotheses
  Numerical,       // solver divergence, continuation failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace caplab
