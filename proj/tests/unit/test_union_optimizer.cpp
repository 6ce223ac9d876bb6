#include <gtest/gtest.h>

#include <cmath>
#include <gausspid/errors.hpp>
#include <gausspid/gaussian.hpp>
#include <gausspid/pid.hpp>
#include <gausspid/union_information.hpp>

#include "support.hpp"

namespace gausspid {
namespace {

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

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

TEST(MarginalConstraints, Validation) {
    EXPECT_EQ(code_of([] { MarginalConstraints{vec({1.0}), vec({0.1})}.validate(); }), ErrorCode::kInvalidArgument);
    EXPECT_EQ(code_of([] { MarginalConstraints{Eigen::VectorXd(0), vec({0.1})}.validate(); }),
              ErrorCode::kInvalidArgument);
    EXPECT_NO_THROW((MarginalConstraints{vec({0.3, 0.4}), vec({0.6})}.validate()));
}

TEST(MarginalConstraints, WhitenedTripletKeepsInformations) {
    testing::Rng rng(8);
    const CovarianceMatrix j(testing::random_spd(5, rng));
    const GaussianTriplet t(j, {0}, {1, 2}, {3, 4});
    const MarginalConstraints mc = MarginalConstraints::from_triplet(t);
    EXPECT_NEAR(-0.5 * std::log1p(-mc.a.squaredNorm()), mutual_information(j, {0}, {1, 2}).value, 1e-12);
    EXPECT_NEAR(-0.5 * std::log1p(-mc.c.squaredNorm()), mutual_information(j, {0}, {3, 4}).value, 1e-12);
}

TEST(Construct, ScalarSources) {
    const Eigen::MatrixXd b = construct_optimal_cross({vec({0.3}), vec({0.6})});
    ASSERT_EQ(b.rows(), 1);
    ASSERT_EQ(b.cols(), 1);
    EXPECT_NEAR(b(0, 0), 0.5, 1e-15);
}

TEST(Construct, TwoDimensionalFirstSource) {
    const MarginalConstraints mc{vec({0.3, 0.4}), vec({0.6})};
    const Eigen::MatrixXd b = construct_optimal_cross(mc);
    ASSERT_EQ(b.rows(), 1);
    ASSERT_EQ(b.cols(), 2);
    EXPECT_NEAR(b(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(b(0, 1), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(union_objective(mc, b), mc.theorem_value_nats(), 1e-12);
    EXPECT_NEAR(mc.theorem_value_nats(), -0.5 * std::log(1 - 0.36), 1e-15);
}

TEST(Construct, RequiresWeakerFirstSource) {
    EXPECT_EQ(code_of([] { (void)construct_optimal_cross({vec({0.6}), vec({0.3})}); }), ErrorCode::kInvalidArgument);
}

TEST(Construct, DegenerateConstraint) {
    EXPECT_EQ(code_of([] { (void)construct_optimal_cross({vec({0.2}), vec({0.0, 0.0})}); }),
              ErrorCode::kDegenerateConstraint);
    const Eigen::MatrixXd zero = construct_optimal_cross({vec({0.0}), vec({0.0, 0.0})});
    EXPECT_TRUE(zero.isZero(0.0));
    EXPECT_EQ(zero.rows(), 2);
}

TEST(Objective, InfiniteOutsideFeasibleSet) {
    const MarginalConstraints mc{vec({0.3}), vec({0.6})};
    EXPECT_TRUE(std::isinf(union_objective(mc, Eigen::MatrixXd::Constant(1, 1, 1.5))));
    const Eigen::MatrixXd s = assemble_union_covariance(mc, Eigen::MatrixXd::Constant(1, 1, 0.2));
    EXPECT_EQ(s(0, 1), 0.3);
    EXPECT_EQ(s(0, 2), 0.6);
    EXPECT_EQ(s(1, 2), 0.2);
}

TEST(Minimize, ScalarCaseReachesTheoremValue) {
    const MarginalConstraints mc{vec({0.3}), vec({0.6})};
    const UnionResult r = minimize_union_information(mc);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.union_info.value, -0.5 * std::log(0.64), 1e-5);
    EXPECT_GE(r.gap, -1e-12);
    EXPECT_NEAR(r.optimal_cross(0, 0), 0.5, 1e-2);
}

TEST(Minimize, MultivariateCaseReachesTheoremValue) {
    const MarginalConstraints mc = random_constraints(3, 2, 41);
    const UnionResult r = minimize_union_information(mc);
    EXPECT_TRUE(r.converged);
    EXPECT_LT(std::abs(r.gap), 1e-5);
    EXPECT_LT(r.max_gradient_discrepancy, 1e-3);
}

TEST(Minimize, TraceRespectsFeasibilityAndMarginals) {
    OptimizerConfig cfg;
    cfg.record_trace = true;
    const UnionResult r = minimize_union_information(random_constraints(2, 2, 5), cfg);
    ASSERT_FALSE(r.trace.empty());
    for (const auto& it : r.trace) {
        EXPECT_GT(it.min_eigenvalue, 0.0);
        EXPECT_TRUE(it.marginals_intact);
        EXPECT_GE(it.objective, r.theorem_value.nats() - 1e-9);
    }
}

TEST(Minimize, SameSeedSameAnswer) {
    const MarginalConstraints mc = random_constraints(2, 3, 77);
    const UnionResult x = minimize_union_information(mc);
    const UnionResult y = minimize_union_information(mc);
    EXPECT_EQ(x.union_info.value, y.union_info.value);
    EXPECT_EQ(x.iterations, y.iterations);
}

TEST(SynergyFromUnion, MatchesMmiSynergy) {
    const GaussianTriplet t = TripletSpec{0.5, 0.3, 0.7}.triplet();
    EXPECT_NEAR(synergy_from_union(t).value, mmi_pid(t).synergy.value, 1e-5);
    EXPECT_NEAR(synergy_from_union(t).value, 0.0999643967633493, 1e-5);
}

TEST(VerifyMmi, OrderedAndThreadIndependent) {
    const auto one = verify_mmi(2, 1, 6, 3, {}, 1);
    const auto three = verify_mmi(2, 1, 6, 3, {}, 3);
    ASSERT_EQ(one.size(), 6u);
    for (std::size_t i = 0; i < one.size(); ++i) {
        EXPECT_EQ(one[i].theorem_value, three[i].theorem_value);
        EXPECT_EQ(one[i].optimizer_value, three[i].optimizer_value);
        EXPECT_LT(std::abs(one[i].optimizer_gap), 1e-5);
        EXPECT_LT(std::abs(one[i].constructive_gap), 1e-10);
    }
}

}  // namespace
}  // namespace gausspid
