#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace icsp {

// Failure classes raised across the library. Callers that need to react to a
// specific condition switch on Error::code(); everything else can treat the
// exception as a plain std::runtime_error.
enum class ErrorCode {
  kInvalidModel,
  kNumericalBreakdown,
  kTooLarge,
  kUnboundedRegion,
  kNoIncumbentAtLimit,
  kDimensionMismatch,
  kRecourseInfeasible,
  kEmptyScenarioSet,
  kNonFiniteLoss,
  kNonNegativityViolated,
  kUnboundedInput,
  kBaselineZero,
  kInfeasibleFirstStage,
  kParseError,
  kIoError,
  kStageFailed,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void Fail(ErrorCode code, const std::string& message);

}  // namespace icsp
