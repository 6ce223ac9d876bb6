#pragma once

#include <string>
#include <string_view>

namespace gausspid {

enum class InfoUnit { kNats, kBits };

[[nodiscard]] std::string_view to_string(InfoUnit unit) noexcept;
/// Accepts "nats" or "bits"; throws Error(kInvalidArgument) otherwise.
[[nodiscard]] InfoUnit parse_info_unit(std::string_view text);

/// Round-off tolerance for information values, in nats. Values in
/// [-kNegativeTolerance, 0) are clamped to zero; anything lower is an error.
inline constexpr double kNegativeTolerance = 1e-9;

/// Clamp tiny negatives to zero; throws Error(kNegativeInformation) below
/// -kNegativeTolerance. `what` names the quantity in the error message.
[[nodiscard]] double clamp_information(double nats, std::string_view what = "information");

/// Converts a nats value at the output boundary.
[[nodiscard]] double convert_nats(double nats, InfoUnit unit) noexcept;

/// An information-valued quantity. Computation is always in nats; the unit
/// is applied once, when the value is wrapped.
struct InfoValue {
    double value = 0.0;
    InfoUnit unit = InfoUnit::kNats;

    [[nodiscard]] static InfoValue from_nats(double nats, InfoUnit unit) noexcept {
        return {convert_nats(nats, unit), unit};
    }
    [[nodiscard]] double nats() const noexcept;
};

}  // namespace gausspid
