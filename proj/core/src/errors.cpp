#include "gausspid/errors.hpp"

namespace gausspid {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::kInvalidArgument: return "InvalidArgument";
        case ErrorCode::kInvalidBlock: return "InvalidBlock";
        case ErrorCode::kOverlappingBlocks: return "OverlappingBlocks";
        case ErrorCode::kSingularBlock: return "SingularBlock";
        case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::kIllConditioned: return "IllConditioned";
        case ErrorCode::kNegativeInformation: return "NegativeInformation";
        case ErrorCode::kUnsupportedTarget: return "UnsupportedTarget";
        case ErrorCode::kInvalidTriplet: return "InvalidTriplet";
        case ErrorCode::kEmptyGrid: return "EmptyGrid";
        case ErrorCode::kDegenerateConstraint: return "DegenerateConstraint";
        case ErrorCode::kNotConverged: return "NotConverged";
        case ErrorCode::kUnstableModel: return "UnstableModel";
        case ErrorCode::kSingularHistory: return "SingularHistory";
        case ErrorCode::kDimensionCap: return "DimensionCap";
        case ErrorCode::kTooFewSamples: return "TooFewSamples";
        case ErrorCode::kParseError: return "ParseError";
        case ErrorCode::kIoError: return "IoError";
    }
    return "Unknown";
}

ErrorCategory category(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::kSingularBlock:
        case ErrorCode::kNotPositiveDefinite:
        case ErrorCode::kIllConditioned:
        case ErrorCode::kNegativeInformation:
        case ErrorCode::kNotConverged:
        case ErrorCode::kSingularHistory:
        case ErrorCode::kDimensionCap:
            return ErrorCategory::kNumerical;
        case ErrorCode::kIoError:
            return ErrorCategory::kIo;
        default:
            return ErrorCategory::kValidation;
    }
}

}  // namespace gausspid
