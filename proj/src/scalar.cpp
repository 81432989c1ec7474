#include "resbdy/scalar.hpp"
#include "resbdy/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <thread>

namespace resbdy {

std::string Precision::name() const {
  switch (kind) {
    case Kind::Double:
      return "double";
    case Kind::LongDouble:
      return "long double";
    default:
      return "mpfr" + std::to_string(digits);
  }
}

Precision choose_precision(double log10_range, double log10_scale) {
  double need = 12.0 + std::max(0.0, log10_range) + std::max(0.0, log10_scale) + 0.5;
  Precision p;
  if (need <= std::numeric_limits<double>::digits10 + 0.6) {
    p.kind = Precision::Kind::Double;
    p.digits = std::numeric_limits<double>::digits10;
  } else if (need <= std::numeric_limits<long double>::digits10 + 1.2) {
    p.kind = Precision::Kind::LongDouble;
    p.digits = std::numeric_limits<long double>::digits10;
  } else {
    p.kind = Precision::Kind::Extended;
    p.digits = static_cast<unsigned>(std::ceil(need)) + 20;
  }
  return p;
}

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RESBDY_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) return std::min<unsigned>(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::NonpositiveConductance: return "NonpositiveConductance";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::MissingNeighborValue: return "MissingNeighborValue";
    case ErrorCode::NotBoundaryVertex: return "NotBoundaryVertex";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::GramDegenerate: return "GramDegenerate";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotHarmonic: return "NotHarmonic";
    case ErrorCode::HarmonicityViolation: return "HarmonicityViolation";
    case ErrorCode::IsolatedVertex: return "IsolatedVertex";
    case ErrorCode::WalkBudgetExceeded: return "WalkBudgetExceeded";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Error";
}

}  // namespace resbdy
