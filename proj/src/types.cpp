#include "schur/types.hpp"

namespace schur {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::SpectrumViolation: return "SpectrumViolation";
    case ErrorCode::NonUniqueSylvester: return "NonUniqueSylvester";
    case ErrorCode::PoleAtPoint: return "PoleAtPoint";
    case ErrorCode::RadiusTooLarge: return "RadiusTooLarge";
    case ErrorCode::SingularDeterminant: return "SingularDeterminant";
    case ErrorCode::NotSchurClass: return "NotSchurClass";
    case ErrorCode::ExtractionStalled: return "ExtractionStalled";
    case ErrorCode::NotNeutral: return "NotNeutral";
    case ErrorCode::DegenerateAlignment: return "DegenerateAlignment";
    case ErrorCode::ForbiddenMu: return "ForbiddenMu";
    case ErrorCode::HolomorphyViolation: return "HolomorphyViolation";
    case ErrorCode::DegreeCapExceeded: return "DegreeCapExceeded";
    case ErrorCode::FactorizationResidual: return "FactorizationResidual";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::DegenerateBlock: return "DegenerateBlock";
    case ErrorCode::SearchExhausted: return "SearchExhausted";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "UnknownError";
}

}  // namespace schur
