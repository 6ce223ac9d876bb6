#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gausspid {

enum class ErrorCode {
    kInvalidArgument,
    kInvalidBlock,
    kOverlappingBlocks,
    kSingularBlock,
    kNotPositiveDefinite,
    kIllConditioned,
    kNegativeInformation,
    kUnsupportedTarget,
    kInvalidTriplet,
    kEmptyGrid,
    kDegenerateConstraint,
    kNotConverged,
    kUnstableModel,
    kSingularHistory,
    kDimensionCap,
    kTooFewSamples,
    kParseError,
    kIoError,
};

/// Broad failure class, used by the CLI to pick an exit code.
enum class ErrorCategory { kValidation, kNumerical, kIo };

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;
[[nodiscard]] ErrorCategory category(ErrorCode code) noexcept;

/// Every failure raised by the library carries a typed code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gausspid
