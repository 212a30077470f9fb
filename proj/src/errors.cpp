#include "coinsim/errors.hpp"

namespace coinsim {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kPoleAtPoint: return "PoleAtPoint";
    case ErrorKind::kInvalidRange: return "InvalidRange";
    case ErrorKind::kCapExceeded: return "CapExceeded";
    case ErrorKind::kNonHaltingState: return "NonHaltingState";
    case ErrorKind::kStepCapExceeded: return "StepCapExceeded";
    case ErrorKind::kLengthMismatch: return "LengthMismatch";
    case ErrorKind::kNotAProbabilityVector: return "NotAProbabilityVector";
    case ErrorKind::kUndefinedFinal: return "UndefinedFinal";
    case ErrorKind::kIterCapExceeded: return "IterCapExceeded";
    case ErrorKind::kNotAlmostSurelyHalting: return "NotAlmostSurelyHalting";
    case ErrorKind::kSyntaxError: return "SyntaxError";
    case ErrorKind::kDivisionByZeroPolynomial: return "DivisionByZeroPolynomial";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kUnknownName: return "UnknownName";
    case ErrorKind::kAlphabetMismatch: return "AlphabetMismatch";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidRange:
    case ErrorKind::kNotAProbabilityVector:
      return 2;
    case ErrorKind::kCapExceeded:
    case ErrorKind::kIterCapExceeded:
    case ErrorKind::kStepCapExceeded:
      return 3;
    case ErrorKind::kSyntaxError:
    case ErrorKind::kDivisionByZeroPolynomial:
    case ErrorKind::kParseError:
    case ErrorKind::kUnknownName:
      return 4;
    case ErrorKind::kNonHaltingState:
    case ErrorKind::kNotAlmostSurelyHalting:
    case ErrorKind::kUndefinedFinal:
      return 5;
    default:
      return 1;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
      kind_(kind) {}

}  // namespace coinsim
