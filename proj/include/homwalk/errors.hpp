#pragma once

#include <stdexcept>
#include <string>

namespace homwalk {

// Every failure mode the library reports deliberately.  Anything else that
// escapes is a genuine bug, not a contract violation.
enum class ErrorCode {
  NonSquare,             // matrix input is not d x d
  BadDeterminant,        // determinant too far from 1 (or non-positive)
  EmptySupport,          // measure with no atoms
  NegativeWeight,        // measure with a weight < 0
  DimensionMismatch,     // operands live in different dimensions
  NumericalBreakdown,    // pivot underflow in an orthogonalization
  SvdFailure,            // singular value decomposition did not converge
  DependentBasis,        // basis vectors are linearly dependent
  DegenerateQuotient,    // quotient space has dimension zero where positive is required
  NoConvergence,         // iterative solver hit its iteration cap
  NotCentered,           // drift is statistically nonzero where zero is required
  UnsupportedDimension,  // dimension outside the supported range
  ParseError,            // malformed input file
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace homwalk
