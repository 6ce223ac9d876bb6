#include <gtest/gtest.h>

#include "property_suites.hpp"

namespace gausspid::testing {
namespace {

void expect_all(const PropertySuite& suite) {
    for (const auto& r : suite) {
        EXPECT_TRUE(r.passed) << r.name << ": worst " << r.worst << " over " << r.cases << " cases, limit " << r.limit;
        EXPECT_GT(r.cases, 0u) << r.name;
    }
}

TEST(Properties, GaussianCoreOverRandomCovariances) { expect_all(gaussian_core_properties(1000)); }
TEST(Properties, PidOverRandomTriplets) { expect_all(pid_properties(1000)); }
TEST(Properties, UnionOptimizerOverRandomConstraints) { expect_all(union_properties(100)); }
TEST(Properties, MvarOverRandomStableModels) { expect_all(mvar_properties(500)); }
TEST(Properties, InformationFlowsOverRandomModels) { expect_all(infodynamics_properties(500)); }
TEST(Properties, ComplexityOverRandomModels) { expect_all(complexity_properties(60)); }

}  // namespace
}  // namespace gausspid::testing
