#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gausspid/covariance.hpp"
#include "gausspid/info.hpp"

namespace gausspid {

/// Joint covariance of (target, source1, source2) with the three blocks named.
class GaussianTriplet {
public:
    /// Throws kInvalidBlock / kOverlappingBlocks if the blocks are out of range
    /// or not pairwise disjoint.
    GaussianTriplet(CovarianceMatrix joint, BlockIndex target, BlockIndex source1, BlockIndex source2);

    [[nodiscard]] const CovarianceMatrix& joint() const noexcept { return joint_; }
    [[nodiscard]] const BlockIndex& target() const noexcept { return target_; }
    [[nodiscard]] const BlockIndex& source1() const noexcept { return source1_; }
    [[nodiscard]] const BlockIndex& source2() const noexcept { return source2_; }

    /// Same triplet with every variable rescaled to unit variance.
    [[nodiscard]] GaussianTriplet standardized() const;

private:
    CovarianceMatrix joint_;
    BlockIndex target_;
    BlockIndex source1_;
    BlockIndex source2_;
};

/// Univariate normalized triplet: a = corr(X,Y), b = corr(Y,Z), c = corr(X,Z).
struct TripletSpec {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    /// 1 − a² − b² − c² + 2abc, the determinant of the correlation matrix.
    [[nodiscard]] double determinant() const noexcept { return 1.0 - a * a - b * b - c * c + 2.0 * a * b * c; }
    [[nodiscard]] bool is_valid() const noexcept;
    /// Throws kInvalidTriplet unless |a|,|b|,|c| < 1 and the determinant is positive.
    void validate() const;
    /// Order (X, Y, Z).
    [[nodiscard]] CovarianceMatrix covariance() const;
    [[nodiscard]] GaussianTriplet triplet() const;
};

enum class WeakerSource { kSource1, kSource2, kTie };

/// Sources whose mutual informations differ by less than this (nats) are tied.
inline constexpr double kTieTolerance = 1e-12;

/// MMI partial information decomposition plus the mutual informations it splits.
struct PidResult {
    InfoValue redundancy;
    InfoValue unique_source1;
    InfoValue unique_source2;
    InfoValue synergy;
    InfoValue mi_source1;
    InfoValue mi_source2;
    InfoValue mi_joint;
    InfoValue wms;
    WeakerSource weaker_source = WeakerSource::kTie;
};

/// Whole-minus-sum I(X;Y,Z) − I(X;Y) − I(X;Z). Negative means net redundancy.
[[nodiscard]] InfoValue net_synergy(const GaussianTriplet& t, InfoUnit unit = InfoUnit::kNats);

/// WMS computed with information measured as variance reduction,
/// I_Σ(X;Y) = Σ(X) − Σ(X|Y), after standardizing the triplet. Not a Shannon
/// quantity, so it is returned as a raw number. Univariate target only.
[[nodiscard]] double net_synergy_sigma(const GaussianTriplet& t);

/// Redundancy = min{I(X;Y), I(X;Z)}; the weaker source gets zero unique
/// information; synergy = I(X;Y,Z) − max{I(X;Y), I(X;Z)}.
///
/// Throws kUnsupportedTarget if the target has more than one variable.
[[nodiscard]] PidResult mmi_pid(const GaussianTriplet& t, InfoUnit unit = InfoUnit::kNats);

/// The MMI split applied to already computed mutual informations (nats).
[[nodiscard]] PidResult mmi_pid_from_informations(double mi_source1, double mi_source2, double mi_joint,
                                                  InfoUnit unit = InfoUnit::kNats);

struct SweepRow {
    std::size_t grid_index = 0;
    double b = 0.0;
    double wms = 0.0;
    double wms_sigma = 0.0;
    double redundancy = 0.0;
    double unique_y = 0.0;
    double unique_z = 0.0;
    double synergy = 0.0;
};

struct SweepTable {
    double a = 0.0;
    double c = 0.0;
    InfoUnit unit = InfoUnit::kNats;
    std::vector<SweepRow> rows;               ///< valid b values, in grid order
    std::vector<std::size_t> skipped;         ///< grid indices of invalid b values
    std::vector<double> grid;
};

/// Evaluates WMS, WMS_Σ and the MMI PID along a grid of source correlations b
/// with a and c fixed. Invalid b (non-PD or ill-conditioned) are skipped and
/// listed. Throws kEmptyGrid if no b is valid.
[[nodiscard]] SweepTable sweep_univariate(double a, double c, std::span<const double> b_grid,
                                          InfoUnit unit = InfoUnit::kNats, unsigned threads = 1);

/// n evenly spaced values from lo to hi inclusive.
[[nodiscard]] std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace gausspid
