#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <gausspid/errors.hpp>
#include <gausspid/gaussian.hpp>
#include <gausspid/pid.hpp>
#include <vector>

#include "support.hpp"

namespace gausspid {
namespace {

double mi_pair(double r) { return -0.5 * std::log(1 - r * r); }

double joint_mi(const TripletSpec& s) { return 0.5 * std::log((1 - s.b * s.b) / s.determinant()); }

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected gausspid::Error";
    return ErrorCode::kInvalidArgument;
}

TEST(TripletSpec, Validation) {
    EXPECT_TRUE((TripletSpec{0.5, 0.3, 0.2}.is_valid()));
    EXPECT_EQ(code_of([] { TripletSpec{1.0, 0.0, 0.0}.validate(); }), ErrorCode::kInvalidTriplet);
    EXPECT_EQ(code_of([] { TripletSpec{0.9, -0.9, 0.9}.validate(); }), ErrorCode::kInvalidTriplet);
    EXPECT_EQ(code_of([] { (void)TripletSpec{0.9, -0.9, 0.9}.covariance(); }), ErrorCode::kInvalidTriplet);
}

TEST(GaussianTriplet, RejectsBadBlocks) {
    const CovarianceMatrix j(Eigen::MatrixXd::Identity(3, 3));
    EXPECT_EQ(code_of([&] { GaussianTriplet t(j, {0}, {1}, {1}); }), ErrorCode::kOverlappingBlocks);
    EXPECT_EQ(code_of([&] { GaussianTriplet t(j, {0}, {1}, {3}); }), ErrorCode::kInvalidBlock);
}

TEST(NetSynergy, EqualSourcesNoSourceCorrelation) {
    const GaussianTriplet t = TripletSpec{0.5, 0.0, 0.5}.triplet();
    const double wms = net_synergy(t).value;
    EXPECT_NEAR(wms, 0.0588915178281917, 1e-14);
    EXPECT_GT(wms, 0.0);
}

TEST(NetSynergy, TargetUncorrelatedWithOneSource) {
    const GaussianTriplet t = TripletSpec{0.5, 0.3, 0.0}.triplet();
    EXPECT_NEAR(net_synergy(t).value, 0.0167613460193218, 1e-14);
    EXPECT_NEAR(net_synergy_sigma(t), 0.0247252747252747, 1e-14);
}

TEST(NetSynergy, SigmaVanishesWithoutSourceCorrelation) {
    for (double a : {-0.7, 0.1, 0.6}) {
        for (double c : {-0.5, 0.2, 0.7}) {
            EXPECT_NEAR(net_synergy_sigma(TripletSpec{a, 0.0, c}.triplet()), 0.0, 1e-14);
        }
    }
}

TEST(NetSynergy, SigmaRequiresUnivariateTarget) {
    testing::Rng rng(3);
    const GaussianTriplet t(CovarianceMatrix(testing::random_spd(4, rng)), {0, 1}, {2}, {3});
    EXPECT_EQ(code_of([&] { (void)net_synergy_sigma(t); }), ErrorCode::kUnsupportedTarget);
}

TEST(MmiPid, WorkedExample) {
    const PidResult p = mmi_pid(TripletSpec{0.5, 0.3, 0.7}.triplet());
    EXPECT_NEAR(p.redundancy.value, 0.143841036225890, 1e-14);
    EXPECT_EQ(p.unique_source1.value, 0.0);
    EXPECT_NEAR(p.unique_source2.value, 0.192831240405992, 1e-14);
    EXPECT_NEAR(p.synergy.value, 0.0999643967633493, 1e-14);
    EXPECT_EQ(p.weaker_source, WeakerSource::kSource1);
}

TEST(MmiPid, UninformativeSourceLeavesPureSynergy) {
    const PidResult p = mmi_pid(TripletSpec{0.0, 0.4, 0.6}.triplet());
    EXPECT_EQ(p.redundancy.value, 0.0);
    EXPECT_NEAR(p.unique_source2.value, mi_pair(0.6), 1e-15);
    EXPECT_NEAR(p.synergy.value, 0.0566643426535016, 1e-14);
}

TEST(MmiPid, TieGivesNoUniqueInformation) {
    const PidResult p = mmi_pid(TripletSpec{0.4, 0.2, -0.4}.triplet());
    EXPECT_EQ(p.weaker_source, WeakerSource::kTie);
    EXPECT_NEAR(p.unique_source1.value, 0.0, 1e-15);
    EXPECT_NEAR(p.unique_source2.value, 0.0, 1e-15);
}

TEST(MmiPid, FourEquationConsistencyInBits) {
    const PidResult p = mmi_pid(TripletSpec{-0.35, 0.55, 0.45}.triplet(), InfoUnit::kBits);
    EXPECT_EQ(p.synergy.unit, InfoUnit::kBits);
    EXPECT_NEAR(p.redundancy.value + p.unique_source1.value, p.mi_source1.value, 1e-14);
    EXPECT_NEAR(p.redundancy.value + p.unique_source2.value, p.mi_source2.value, 1e-14);
    EXPECT_NEAR(p.redundancy.value + p.unique_source1.value + p.unique_source2.value + p.synergy.value,
                p.mi_joint.value, 1e-14);
    EXPECT_NEAR(p.wms.value, p.synergy.value - p.redundancy.value, 1e-14);
}

TEST(MmiPid, MultivariateSourcesAllowedButNotTargets) {
    testing::Rng rng(17);
    const CovarianceMatrix j(testing::random_spd(5, rng));
    const PidResult p = mmi_pid(GaussianTriplet(j, {0}, {1, 2}, {3, 4}));
    EXPECT_NEAR(p.mi_joint.value, mutual_information(j, {0}, {1, 2, 3, 4}).value, 1e-12);
    EXPECT_EQ(code_of([&] { (void)mmi_pid(GaussianTriplet(j, {0, 1}, {2}, {3, 4})); }),
              ErrorCode::kUnsupportedTarget);
}

TEST(MmiPid, FromInformationsRejectsInconsistentInput) {
    EXPECT_EQ(code_of([] { (void)mmi_pid_from_informations(0.5, 0.2, 0.3); }), ErrorCode::kNegativeInformation);
}

TEST(MmiPid, SynergyDivergesNearSingularBoundary) {
    const double a = 0.25, c = 0.75;
    const double edge = a * c + std::sqrt((1 - a * a) * (1 - c * c));
    double previous = 0.0;
    for (double delta : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10}) {
        const double s = mmi_pid(TripletSpec{a, edge - delta, c}.triplet()).synergy.value;
        EXPECT_GT(s, previous) << "delta " << delta;
        previous = s;
    }
    EXPECT_GT(previous, 10.0);
}

TEST(MmiPid, AgreesWithSampledCovariances) {
    const TripletSpec spec{0.5, 0.3, 0.7};
    const PidResult truth = mmi_pid(spec.triplet());
    testing::Rng rng(99);
    std::vector<double> r, u, s;
    for (int rep = 0; rep < 40; ++rep) {
        const Eigen::MatrixXd draws = testing::sample_gaussian(spec.covariance().matrix(), 50'000, rng);
        const PidResult p = mmi_pid(GaussianTriplet(CovarianceMatrix(testing::sample_covariance(draws)), {0}, {1}, {2}));
        r.push_back(p.redundancy.value);
        u.push_back(p.unique_source2.value);
        s.push_back(p.synergy.value);
    }
    const auto mr = testing::mean_se(r);
    const auto mu = testing::mean_se(u);
    const auto ms = testing::mean_se(s);
    EXPECT_NEAR(mr.mean, truth.redundancy.value, 3 * mr.se);
    EXPECT_NEAR(mu.mean, truth.unique_source2.value, 3 * mu.se);
    EXPECT_NEAR(ms.mean, truth.synergy.value, 3 * ms.se);
}

TEST(MmiPid, ClosedFormsOverRandomTriplets) {
    testing::Rng rng(123);
    for (int i = 0; i < 200; ++i) {
        const TripletSpec s = testing::random_triplet_spec(rng);
        const PidResult p = mmi_pid(s.triplet());
        EXPECT_NEAR(p.mi_source1.value, mi_pair(s.a), 1e-10);
        EXPECT_NEAR(p.mi_source2.value, mi_pair(s.c), 1e-10);
        EXPECT_NEAR(p.mi_joint.value, joint_mi(s), 1e-10);
        EXPECT_NEAR(p.wms.value, joint_mi(s) - mi_pair(s.a) - mi_pair(s.c), 1e-10);
    }
}

TEST(Sweep, SkipsInvalidAndKeepsRedundancyConstant) {
    const auto grid = linspace(-0.99, 0.99, 199);
    const SweepTable t = sweep_univariate(0.25, 0.75, grid);
    EXPECT_FALSE(t.skipped.empty());
    EXPECT_EQ(t.rows.size() + t.skipped.size(), grid.size());
    for (const auto& row : t.rows) {
        EXPECT_NEAR(row.redundancy, t.rows.front().redundancy, 1e-12);
        EXPECT_TRUE((TripletSpec{0.25, row.b, 0.75}.is_valid()));
    }
}

TEST(Sweep, SynergyVanishesWhereFirstSourceIsScreenedOff) {
    const double a = 0.3, c = 0.6;
    const std::vector<double> grid{a / c};
    const SweepTable t = sweep_univariate(a, c, grid);
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_NEAR(t.rows[0].synergy, 0.0, 1e-10);
}

TEST(Sweep, WmsShapes) {
    const auto grid = linspace(-0.99, 0.99, 397);
    auto wms_of = [&](double a, double c) {
        std::vector<double> w;
        for (const auto& r : sweep_univariate(a, c, grid).rows) w.push_back(r.wms);
        return w;
    };
    const auto down = wms_of(0.5, 0.5);
    for (std::size_t i = 1; i < down.size(); ++i) EXPECT_LT(down[i], down[i - 1]);
    const auto up = wms_of(0.5, -0.5);
    for (std::size_t i = 1; i < up.size(); ++i) EXPECT_GT(up[i], up[i - 1]);
    const auto u = wms_of(0.25, 0.75);
    const auto lowest = std::min_element(u.begin(), u.end()) - u.begin();
    EXPECT_GT(lowest, 0);
    EXPECT_LT(lowest, static_cast<long>(u.size()) - 1);
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
    const auto grid = linspace(-0.9, 0.9, 61);
    const SweepTable one = sweep_univariate(0.4, -0.3, grid, InfoUnit::kBits, 1);
    const SweepTable four = sweep_univariate(0.4, -0.3, grid, InfoUnit::kBits, 4);
    ASSERT_EQ(one.rows.size(), four.rows.size());
    for (std::size_t i = 0; i < one.rows.size(); ++i) {
        EXPECT_EQ(one.rows[i].b, four.rows[i].b);
        EXPECT_EQ(one.rows[i].synergy, four.rows[i].synergy);
        EXPECT_EQ(one.rows[i].wms_sigma, four.rows[i].wms_sigma);
    }
}

TEST(Sweep, EmptyGridFails) {
    const std::vector<double> grid{0.999, 0.9999};
    EXPECT_EQ(code_of([&] { (void)sweep_univariate(0.9, -0.9, grid); }), ErrorCode::kEmptyGrid);
    EXPECT_EQ(code_of([] { (void)sweep_univariate(0.2, 0.2, std::vector<double>{}); }), ErrorCode::kEmptyGrid);
}

}  // namespace
}  // namespace gausspid
