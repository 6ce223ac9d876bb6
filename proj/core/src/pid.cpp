#include "gausspid/pid.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "gausspid/errors.hpp"
#include "gausspid/gaussian.hpp"
#include "gausspid/parallel.hpp"

namespace gausspid {

GaussianTriplet::GaussianTriplet(CovarianceMatrix joint, BlockIndex target, BlockIndex source1, BlockIndex source2)
    : joint_(std::move(joint)), target_(std::move(target)), source1_(std::move(source1)), source2_(std::move(source2)) {
    const auto dim = joint_.dim();
    target_.validate(dim);
    source1_.validate(dim);
    source2_.validate(dim);
    if (target_.overlaps(source1_) || target_.overlaps(source2_) || source1_.overlaps(source2_)) {
        throw Error(ErrorCode::kOverlappingBlocks, "target and source blocks must be pairwise disjoint");
    }
}

GaussianTriplet GaussianTriplet::standardized() const {
    return GaussianTriplet(joint_.standardized(), target_, source1_, source2_);
}

bool TripletSpec::is_valid() const noexcept {
    return std::abs(a) < 1.0 && std::abs(b) < 1.0 && std::abs(c) < 1.0 && determinant() > 0.0;
}

void TripletSpec::validate() const {
    if (!is_valid()) {
        std::ostringstream msg;
        msg << "(a, b, c) = (" << a << ", " << b << ", " << c << ") is not a valid correlation structure";
        throw Error(ErrorCode::kInvalidTriplet, msg.str());
    }
}

CovarianceMatrix TripletSpec::covariance() const {
    validate();
    Eigen::Matrix3d m;
    m << 1.0, a, c,  //
        a, 1.0, b,   //
        c, b, 1.0;
    return CovarianceMatrix(m, {"X", "Y", "Z"});
}

GaussianTriplet TripletSpec::triplet() const { return GaussianTriplet(covariance(), {0}, {1}, {2}); }

namespace {

struct TripletInformations {
    double source1;
    double source2;
    double joint;
};

TripletInformations informations(const GaussianTriplet& t) {
    const auto& m = t.joint().matrix();
    const BlockIndex both = t.source1().united(t.source2());
    return {
        clamp_information(linalg::mutual_information_nats(m, t.target().indices(), t.source1().indices()),
                          "I(X;Y)"),
        clamp_information(linalg::mutual_information_nats(m, t.target().indices(), t.source2().indices()),
                          "I(X;Z)"),
        clamp_information(linalg::mutual_information_nats(m, t.target().indices(), both.indices()), "I(X;Y,Z)"),
    };
}

void require_univariate_target(const GaussianTriplet& t) {
    if (t.target().size() != 1) {
        throw Error(ErrorCode::kUnsupportedTarget,
                    "the decomposition is only defined for a univariate target (got dimension " +
                        std::to_string(t.target().size()) + ")");
    }
}

}  // namespace

InfoValue net_synergy(const GaussianTriplet& t, InfoUnit unit) {
    const auto mi = informations(t);
    return InfoValue::from_nats(mi.joint - mi.source1 - mi.source2, unit);
}

double net_synergy_sigma(const GaussianTriplet& t) {
    require_univariate_target(t);
    const GaussianTriplet s = t.standardized();
    const auto& m = s.joint().matrix();
    const std::size_t x = s.target()[0];
    const BlockIndex both = s.source1().united(s.source2());
    const double var = m(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x));
    const double reduction_y = var - linalg::conditional_variance(m, x, s.source1().indices());
    const double reduction_z = var - linalg::conditional_variance(m, x, s.source2().indices());
    const double reduction_yz = var - linalg::conditional_variance(m, x, both.indices());
    return reduction_yz - reduction_y - reduction_z;
}

PidResult mmi_pid_from_informations(double mi_source1, double mi_source2, double mi_joint, InfoUnit unit) {
    const double redundancy = std::min(mi_source1, mi_source2);
    const double stronger = std::max(mi_source1, mi_source2);
    const double synergy = clamp_information(mi_joint - stronger, "synergy");

    PidResult r;
    r.redundancy = InfoValue::from_nats(redundancy, unit);
    r.unique_source1 = InfoValue::from_nats(mi_source1 - redundancy, unit);
    r.unique_source2 = InfoValue::from_nats(mi_source2 - redundancy, unit);
    r.synergy = InfoValue::from_nats(synergy, unit);
    r.mi_source1 = InfoValue::from_nats(mi_source1, unit);
    r.mi_source2 = InfoValue::from_nats(mi_source2, unit);
    r.mi_joint = InfoValue::from_nats(mi_joint, unit);
    r.wms = InfoValue::from_nats(mi_joint - mi_source1 - mi_source2, unit);
    if (std::abs(mi_source1 - mi_source2) < kTieTolerance) {
        r.weaker_source = WeakerSource::kTie;
    } else {
        r.weaker_source = mi_source1 < mi_source2 ? WeakerSource::kSource1 : WeakerSource::kSource2;
    }
    return r;
}

PidResult mmi_pid(const GaussianTriplet& t, InfoUnit unit) {
    require_univariate_target(t);
    const auto mi = informations(t);
    return mmi_pid_from_informations(mi.source1, mi.source2, mi.joint, unit);
}

SweepTable sweep_univariate(double a, double c, std::span<const double> b_grid, InfoUnit unit, unsigned threads) {
    std::vector<std::optional<SweepRow>> slots(b_grid.size());
    parallel_for(b_grid.size(), threads, [&](std::size_t i) {
        const TripletSpec spec{a, b_grid[i], c};
        if (!spec.is_valid()) return;
        try {
            const GaussianTriplet t = spec.triplet();
            const PidResult pid = mmi_pid(t, unit);
            slots[i] = SweepRow{
                .grid_index = i,
                .b = spec.b,
                .wms = pid.wms.value,
                .wms_sigma = net_synergy_sigma(t),
                .redundancy = pid.redundancy.value,
                .unique_y = pid.unique_source1.value,
                .unique_z = pid.unique_source2.value,
                .synergy = pid.synergy.value,
            };
        } catch (const Error&) {
            // Near the singular boundary: treated like an invalid b.
        }
    });

    SweepTable table;
    table.a = a;
    table.c = c;
    table.unit = unit;
    table.grid.assign(b_grid.begin(), b_grid.end());
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i]) {
            table.rows.push_back(*slots[i]);
        } else {
            table.skipped.push_back(i);
        }
    }
    if (table.rows.empty()) throw Error(ErrorCode::kEmptyGrid, "no value of b in the grid is valid");
    return table;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

}  // namespace gausspid
