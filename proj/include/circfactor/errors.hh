#pragma once

#include <stdexcept>
#include <string>

namespace circfactor {

// Base for every library error. kind() is the stable name used by the CLI
// diagnostics and by tests.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define CIRCFACTOR_ERROR(Name)                                              \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what = "") : Error(#Name, what) {}     \
  };

CIRCFACTOR_ERROR(ZeroInverse)
CIRCFACTOR_ERROR(FieldMismatch)
CIRCFACTOR_ERROR(ParseError)
CIRCFACTOR_ERROR(DegenerateInput)
CIRCFACTOR_ERROR(NotMonic)
CIRCFACTOR_ERROR(InexactDivision)
CIRCFACTOR_ERROR(UnknownVariable)
CIRCFACTOR_ERROR(CycleError)
CIRCFACTOR_ERROR(UnknownIdentifier)
CIRCFACTOR_ERROR(MissingAssignment)
CIRCFACTOR_ERROR(DimensionMismatch)
CIRCFACTOR_ERROR(ZeroDivisorAtPoint)
CIRCFACTOR_ERROR(CapExceeded)
CIRCFACTOR_ERROR(InfeasibleParameters)
CIRCFACTOR_ERROR(ArityMismatch)
CIRCFACTOR_ERROR(FallbackExhausted)
CIRCFACTOR_ERROR(DegenerateRoot)
CIRCFACTOR_ERROR(NotARoot)
CIRCFACTOR_ERROR(HypothesisViolated)
CIRCFACTOR_ERROR(SingularSystem)
CIRCFACTOR_ERROR(ZeroDeterminantOnGrid)
CIRCFACTOR_ERROR(VerificationFailed)
CIRCFACTOR_ERROR(DegreeOrder)
CIRCFACTOR_ERROR(RecombinationCapExceeded)

#undef CIRCFACTOR_ERROR

// SyntaxError carries a source location.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& what)
      : Error("SyntaxError", "line " + std::to_string(line) + ", column " +
                                 std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

}  // namespace circfactor
