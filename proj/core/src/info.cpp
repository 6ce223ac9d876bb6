#include "gausspid/info.hpp"

#include <cmath>
#include <numbers>

#include "gausspid/errors.hpp"

namespace gausspid {

std::string_view to_string(InfoUnit unit) noexcept {
    return unit == InfoUnit::kBits ? "bits" : "nats";
}

InfoUnit parse_info_unit(std::string_view text) {
    if (text == "nats") return InfoUnit::kNats;
    if (text == "bits") return InfoUnit::kBits;
    throw Error(ErrorCode::kInvalidArgument, "unknown unit '" + std::string(text) + "' (expected nats or bits)");
}

double clamp_information(double nats, std::string_view what) {
    if (std::isnan(nats)) {
        throw Error(ErrorCode::kNegativeInformation, std::string(what) + " is NaN");
    }
    if (nats < -kNegativeTolerance) {
        throw Error(ErrorCode::kNegativeInformation,
                    std::string(what) + " = " + std::to_string(nats) + " nats is below the round-off tolerance");
    }
    return nats < 0.0 ? 0.0 : nats;
}

double convert_nats(double nats, InfoUnit unit) noexcept {
    return unit == InfoUnit::kBits ? nats / std::numbers::ln2 : nats;
}

double InfoValue::nats() const noexcept {
    return unit == InfoUnit::kBits ? value * std::numbers::ln2 : value;
}

}  // namespace gausspid
