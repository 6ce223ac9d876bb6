#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gausspid/info.hpp"
#include "gausspid/mvar.hpp"
#include "gausspid/pid.hpp"

namespace gausspid {

/// History length used for past variables: a fixed number of lags, or the
/// infinite past approximated by lag doubling to a relative tolerance.
class LagSpec {
public:
    [[nodiscard]] static LagSpec finite(std::size_t lags);
    [[nodiscard]] static LagSpec infinite(double tol = 1e-10);
    /// "inf" / "infinite" or a positive integer.
    [[nodiscard]] static LagSpec parse(std::string_view text, double tol = 1e-10);

    [[nodiscard]] bool is_infinite() const noexcept { return infinite_; }
    [[nodiscard]] std::size_t lags() const noexcept { return lags_; }
    [[nodiscard]] double tolerance() const noexcept { return tol_; }
    [[nodiscard]] std::string to_string() const;

private:
    bool infinite_ = false;
    std::size_t lags_ = 1;
    double tol_ = 1e-10;
};

/// A directed information-flow question about one model.
struct FlowQuery {
    std::size_t source = 0;
    std::size_t target = 0;
    std::vector<std::size_t> conditionals;
    LagSpec lags = LagSpec::finite(1);
    InfoUnit unit = InfoUnit::kNats;
    /// Finite mode only: length of the target's own history when it should
    /// differ from the source history.
    std::optional<std::size_t> target_lags;

    /// Throws kInvalidArgument if ids are out of range, source == target, or a
    /// conditional repeats the source or target.
    void validate(const MvarModel& m) const;
};

/// An information value plus the truncation it was computed at (the finite
/// lag count, or the converged L in infinite mode).
struct FlowResult {
    InfoValue value;
    std::size_t lags_used = 0;
};

struct GrangerResult {
    double value = 0.0;  ///< natural-log ratio of residual variances
    std::size_t lags_used = 0;
};

struct DynamicPidResult {
    PidResult pid;
    std::size_t lags_used = 0;
};

/// ½ log[Σ(X_t | X⁻, Z⁻) / Σ(X_t | X⁻, Y⁻, Z⁻)] with X the target, Y the source
/// and Z the conditionals (pasts only).
[[nodiscard]] FlowResult transfer_entropy(const MvarModel& m, const FlowQuery& q);

/// transfer_entropy with a non-empty conditioning set (kInvalidArgument otherwise).
[[nodiscard]] FlowResult conditional_transfer_entropy(const MvarModel& m, const FlowQuery& q);

/// I(target_t ; source history). The source may be the target itself.
[[nodiscard]] FlowResult lagged_mutual_information(const MvarModel& m, std::size_t source, std::size_t target,
                                                   const LagSpec& lags, InfoUnit unit = InfoUnit::kNats);

/// log[Σ(X_t | X⁻, Z⁻) / Σ(X_t | X⁻, Y⁻, Z⁻)], twice the transfer entropy in nats.
[[nodiscard]] GrangerResult granger_causality(const MvarModel& m, const FlowQuery& q);

/// MMI decomposition of I(target_t ; sourceA⁻, sourceB⁻). Either source may be
/// the target's own past; the two sources must differ.
[[nodiscard]] DynamicPidResult dynamic_mmi_pid(const MvarModel& m, std::size_t target, std::size_t source_a,
                                               std::size_t source_b, const LagSpec& lags,
                                               InfoUnit unit = InfoUnit::kNats);

/// Σ(target_t | pasts of each set), all at one truncation. In finite mode each
/// variable uses `lags` except the target, which uses `target_lags` if given.
[[nodiscard]] std::vector<ConditionalVariance> conditional_variances(
    const MvarModel& m, std::size_t target, const std::vector<std::vector<std::size_t>>& sets, const LagSpec& lags,
    std::optional<std::size_t> target_lags = std::nullopt);

}  // namespace gausspid
