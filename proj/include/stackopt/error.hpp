#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stackopt {

enum class ErrorKind {
  MalformedRow,
  OutOfRange,
  LengthMismatch,
  NegativeRate,
  FileNotFound,
  NonConcave,
  Config,
  Infeasible,
  Unbounded,
  UnboundedSurplusArbitrage,
  IterationLimit,
  NumericalBreakdown,
  EmptyLifetime,
  MaxYearsExceeded,
  EmptyCurve,
};

std::string_view to_string(ErrorKind kind);

// Process exit status for the command-line tool: 2 configuration or input
// error, 3 infeasible, 4 unbounded, 5 numerical failure, 6 lifetime not
// reached.
int exit_code(ErrorKind kind);

// Every failure in the library surfaces as this type; kind() is the stable
// classification, what() carries the human-readable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace stackopt
