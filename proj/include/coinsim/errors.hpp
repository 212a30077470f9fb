#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coinsim {

enum class ErrorKind {
  kPoleAtPoint,
  kInvalidRange,
  kCapExceeded,
  kNonHaltingState,
  kStepCapExceeded,
  kLengthMismatch,
  kNotAProbabilityVector,
  kUndefinedFinal,
  kIterCapExceeded,
  kNotAlmostSurelyHalting,
  kSyntaxError,
  kDivisionByZeroPolynomial,
  kParseError,
  kUnknownName,
  kAlphabetMismatch,
  kInvalidArgument,
};

std::string_view error_kind_name(ErrorKind kind);

// Process exit code for a failure of this kind. The contract is
// 0 success, 1 generic failure or mismatch, 2 range, 3 cap, 4 parse,
// 5 non-halting.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace coinsim
