#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gausspid/info.hpp"
#include "gausspid/infodynamics.hpp"
#include "gausspid/mvar.hpp"

namespace gausspid {

/// One contribution to a system-level measure. `source2` is set only for
/// synergistic-complexity triples (target; source, source2) with source < source2.
struct ComplexityTerm {
    std::size_t target = 0;
    std::size_t source = 0;
    std::optional<std::size_t> source2;
    double value = 0.0;  ///< in the measure's unit
    std::size_t lags_used = 0;
};

/// Aggregate = normalization × Σ terms, summed in term order.
struct ComplexityMeasure {
    InfoValue value;
    double normalization = 0.0;
    std::vector<ComplexityTerm> terms;
    std::size_t lags_used = 0;
};

/// (1/(n(n−1))) Σ_{i≠j} F_{j→i | rest}, conditioning on the pasts of every other
/// variable. Defaults to the converged infinite past.
[[nodiscard]] ComplexityMeasure causal_density(const MvarModel& m, const LagSpec& lags = LagSpec::infinite(),
                                               InfoUnit unit = InfoUnit::kNats, unsigned threads = 0);

/// (1/n) Σ_i [I(M_i,t ; M⁻) − I(M_i,t ; M_i⁻)].
[[nodiscard]] ComplexityMeasure global_transfer_entropy(const MvarModel& m, const LagSpec& lags = LagSpec::infinite(),
                                                        InfoUnit unit = InfoUnit::kNats, unsigned threads = 0);

/// (2/(n(n−1)(n−2))) Σ_i Σ_{j<k, j,k≠i} S_MMI(M_i,t ; M_j⁻, M_k⁻). Needs n ≥ 3.
[[nodiscard]] ComplexityMeasure synergistic_complexity(const MvarModel& m, const LagSpec& lags = LagSpec::infinite(),
                                                       InfoUnit unit = InfoUnit::kNats, unsigned threads = 0);

struct ComplexityReport {
    ComplexityMeasure causal_density;
    ComplexityMeasure global_te;
    /// Empty for systems with fewer than three variables.
    std::optional<ComplexityMeasure> synergistic_complexity;
    std::size_t n_vars = 0;
    LagSpec lags = LagSpec::infinite();
    InfoUnit unit = InfoUnit::kNats;
    /// Largest truncation used by any term.
    std::size_t lags_used = 0;
};

/// All three measures at one shared lag specification.
[[nodiscard]] ComplexityReport complexity_report(const MvarModel& m, const LagSpec& lags = LagSpec::infinite(),
                                                 InfoUnit unit = InfoUnit::kNats, unsigned threads = 0);

}  // namespace gausspid
