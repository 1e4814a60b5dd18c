#include "stackopt/error.hpp"

namespace stackopt {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NegativeRate: return "NegativeRate";
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::NonConcave: return "NonConcave";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::UnboundedSurplusArbitrage: return "UnboundedSurplusArbitrage";
    case ErrorKind::IterationLimit: return "IterationLimit";
    case ErrorKind::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorKind::EmptyLifetime: return "EmptyLifetime";
    case ErrorKind::MaxYearsExceeded: return "MaxYearsExceeded";
    case ErrorKind::EmptyCurve: return "EmptyCurve";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Infeasible: return 3;
    case ErrorKind::Unbounded:
    case ErrorKind::UnboundedSurplusArbitrage: return 4;
    case ErrorKind::IterationLimit:
    case ErrorKind::NumericalBreakdown: return 5;
    case ErrorKind::EmptyLifetime:
    case ErrorKind::MaxYearsExceeded:
    case ErrorKind::EmptyCurve: return 6;
    default: return 2;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace stackopt
