#include "homwalk/errors.hpp"

namespace homwalk {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::BadDeterminant: return "BadDeterminant";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::SvdFailure: return "SvdFailure";
    case ErrorCode::DependentBasis: return "DependentBasis";
    case ErrorCode::DegenerateQuotient: return "DegenerateQuotient";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotCentered: return "NotCentered";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace homwalk
