#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace resbdy {

enum class ErrorCode {
  DisconnectedGraph = 10,
  NonpositiveConductance = 11,
  SelfLoop = 12,
  InvalidParameters = 13,
  DomainMismatch = 20,
  MissingNeighborValue = 21,
  NotBoundaryVertex = 22,
  SolverFailure = 30,
  SingularSystem = 31,
  NotConverged = 32,
  GramDegenerate = 40,
  DimensionMismatch = 50,
  NotHarmonic = 51,
  HarmonicityViolation = 52,
  IsolatedVertex = 60,
  WalkBudgetExceeded = 61,
  UsageError = 70,
};

const char* error_name(ErrorCode code);

// Short scientific rendering of a value for error messages.
inline std::string format_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace resbdy
