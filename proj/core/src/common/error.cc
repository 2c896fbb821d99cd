#include "icsp/common/error.h"

namespace icsp {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidModel: return "InvalidModel";
    case ErrorCode::kNumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kUnboundedRegion: return "UnboundedRegion";
    case ErrorCode::kNoIncumbentAtLimit: return "NoIncumbentAtLimit";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kRecourseInfeasible: return "RecourseInfeasible";
    case ErrorCode::kEmptyScenarioSet: return "EmptyScenarioSet";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kNonNegativityViolated: return "NonNegativityViolated";
    case ErrorCode::kUnboundedInput: return "UnboundedInput";
    case ErrorCode::kBaselineZero: return "BaselineZero";
    case ErrorCode::kInfeasibleFirstStage: return "InfeasibleFirstStage";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kStageFailed: return "StageFailed";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace icsp
