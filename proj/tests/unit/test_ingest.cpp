#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <gausspid/dataset.hpp>
#include <gausspid/errors.hpp>
#include <gausspid/gaussian.hpp>
#include <gausspid/model_io.hpp>
#include <sstream>

#include "support.hpp"

namespace gausspid {
namespace {

namespace fs = std::filesystem;

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

Dataset parse(const std::string& text) {
    std::istringstream in(text);
    return parse_csv(in);
}

Dataset from_samples(Eigen::MatrixXd x) {
    Dataset d;
    d.labels.resize(static_cast<std::size_t>(x.cols()));
    for (std::size_t i = 0; i < d.labels.size(); ++i) d.labels[i] = "v" + std::to_string(i);
    d.samples = std::move(x);
    return d;
}

fs::path temp_file(const std::string& name, const std::string& content) {
    const fs::path p = fs::temp_directory_path() / ("gausspid_ingest_" + name);
    std::ofstream(p) << content;
    return p;
}

TEST(Csv, ParsesHeaderAndRows) {
    const Dataset d = parse("X,Y\n1,2.5\n-3e-1,4\n\n");
    EXPECT_EQ(d.labels, (std::vector<std::string>{"X", "Y"}));
    ASSERT_EQ(d.steps(), 2u);
    EXPECT_EQ(d.samples(1, 0), -0.3);
    EXPECT_FALSE(d.demeaned);
}

TEST(Csv, RejectsMalformedInput) {
    for (const char* bad : {"X,Y\n1,\n", "X,Y\n1,2,3\n", "X,Y\n1\n", "X,Y\n1,abc\n", "X,Y\n1,nan\n", "X,Y\n1,inf\n",
                            "X,Y\n1,2\n\n3,4\n", "", "X,,Y\n1,2,3\n"}) {
        EXPECT_EQ(code_of([&] { (void)parse(bad); }), ErrorCode::kParseError) << bad;
    }
}

TEST(Csv, WriteThenReadIsExact) {
    testing::Rng rng(1);
    const Eigen::MatrixXd x = testing::gaussian_matrix(50, 3, rng);
    std::ostringstream out;
    write_csv(out, x, {"a", "b", "c"});
    const Dataset d = parse(out.str());
    EXPECT_TRUE(d.samples.isApprox(x, 0.0));
    EXPECT_EQ(code_of([] { (void)read_csv("/nonexistent/gausspid.csv"); }), ErrorCode::kIoError);
}

TEST(Dataset, MinimumSamplesAndCentering) {
    testing::Rng rng(2);
    const Dataset d = from_samples(testing::gaussian_matrix(16, 2, rng).array() + 5.0);
    EXPECT_NO_THROW(d.require_samples(1));
    EXPECT_EQ(code_of([&] { d.require_samples(2); }), ErrorCode::kTooFewSamples);
    const Dataset c = d.centered();
    EXPECT_TRUE(c.demeaned);
    EXPECT_LT(c.samples.colwise().mean().cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_EQ(code_of([&] { (void)estimate_covariance(d, 3); }), ErrorCode::kTooFewSamples);
}

TEST(EstimateCovariance, RecoversConditionalVariances) {
    const double alpha = 0.5;
    const MvarModel m = testing::example1(alpha);
    const std::vector<std::vector<std::size_t>> given{{2}, {3}, {2, 3}};
    const std::vector<double> truth{1 + alpha * alpha, (1 + std::pow(alpha, 4)) / (1 - alpha * alpha), 1.0};

    auto estimate = [&](std::uint64_t seed) {
        const EstimatedHistory est = estimate_covariance(from_samples(simulate(m, 1'000'000, seed)), 1);
        EXPECT_EQ(est.loading, 0.0);
        EXPECT_EQ(est.usable_rows, 999'999u);
        std::vector<double> v;
        for (const auto& g : given) v.push_back(linalg::conditional_variance(est.history.joint().matrix(), 0, g));
        return v;
    };
    const auto primary = estimate(42);
    std::vector<std::vector<double>> replicates(given.size());
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const auto v = estimate(seed);
        for (std::size_t i = 0; i < v.size(); ++i) replicates[i].push_back(v[i]);
    }
    for (std::size_t i = 0; i < given.size(); ++i) {
        // The spread of single-run estimates is the standard error of one run.
        const double se = testing::mean_se(replicates[i]).sd;
        EXPECT_NEAR(primary[i], truth[i], 3 * se) << "set " << i;
    }
}

TEST(EstimateCovariance, LabelsFollowHistoryLayout) {
    testing::Rng rng(6);
    Dataset d = from_samples(testing::gaussian_matrix(200, 2, rng));
    d.labels = {"X", "Y"};
    const EstimatedHistory est = estimate_covariance(d, 2);
    EXPECT_EQ(est.history.joint().dim(), 6u);
    EXPECT_EQ(est.history.joint().labels()[0], "X[t]");
    EXPECT_EQ(est.history.joint().labels()[3], "Y[t-1]");
    EXPECT_EQ(est.usable_rows, 198u);
}

TEST(EstimateCovariance, RejectsCollinearData) {
    testing::Rng rng(7);
    Eigen::MatrixXd x = testing::gaussian_matrix(500, 2, rng);
    x.col(1).setConstant(3.0);
    EXPECT_EQ(code_of([&] { (void)estimate_covariance(from_samples(x), 1); }), ErrorCode::kNotPositiveDefinite);
    x.col(1) = x.col(0);
    EXPECT_EQ(code_of([&] { (void)estimate_covariance(from_samples(x), 1); }), ErrorCode::kNotPositiveDefinite);
}

TEST(FitMvar, RecoversCorrelatedDriverModel) {
    const MvarModel truth = testing::example3(1.0, 1.0, 0.0);
    Dataset d = from_samples(simulate(truth, 1'000'000, 11));
    const FitResult r = fit_mvar(d, 1);
    ASSERT_EQ(r.coefficients.size(), 1u);
    EXPECT_LT((r.coefficients[0] - truth.coefficients()[0]).cwiseAbs().maxCoeff(), 0.01);
    const double rho = r.noise_cov(1, 2) / std::sqrt(r.noise_cov(1, 1) * r.noise_cov(2, 2));
    EXPECT_LT(std::abs(rho), 0.01);
    EXPECT_TRUE(r.stable);
    EXPECT_EQ(r.usable_rows, 999'999u);
    EXPECT_NO_THROW((void)r.model());
}

TEST(FitMvar, WhiteNoiseGivesZeroCoefficients) {
    testing::Rng rng(12);
    const FitResult r = fit_mvar(from_samples(testing::gaussian_matrix(1'000'000, 3, rng)), 2);
    for (const auto& a : r.coefficients) EXPECT_LT(a.cwiseAbs().maxCoeff(), 0.01);
    EXPECT_LT(r.intercept.cwiseAbs().maxCoeff(), 0.01);
}

TEST(FitMvar, LinearTrendIsFlaggedUnstable) {
    testing::Rng rng(13);
    Eigen::MatrixXd x = testing::gaussian_matrix(2000, 2, rng);
    for (Eigen::Index t = 0; t < x.rows(); ++t) x(t, 0) = 0.5 * static_cast<double>(t);
    const FitResult r = fit_mvar(from_samples(x), 1);
    EXPECT_FALSE(r.stable);
    EXPECT_GT(r.spectral_radius, 1.0 - 1e-6);
    EXPECT_ANY_THROW((void)r.model());
}

TEST(FitMvar, ArgumentErrors) {
    testing::Rng rng(14);
    const Dataset d = from_samples(testing::gaussian_matrix(30, 2, rng));
    EXPECT_EQ(code_of([&] { (void)fit_mvar(d, 0); }), ErrorCode::kInvalidArgument);
    EXPECT_EQ(code_of([&] { (void)fit_mvar(d, 10); }), ErrorCode::kTooFewSamples);
}

TEST(ModelJson, RoundTripAndShippedModels) {
    testing::Rng rng(15);
    const MvarModel m = testing::random_stable_model(3, 2, rng);
    const MvarModel back = parse_model_json(model_to_json(m));
    ASSERT_EQ(back.order(), 2u);
    for (std::size_t j = 0; j < 2; ++j) EXPECT_TRUE(back.coefficients()[j].isApprox(m.coefficients()[j], 0.0));
    EXPECT_TRUE(back.noise_cov().matrix().isApprox(m.noise_cov().matrix(), 0.0));

    const MvarModel ex3 = load_model(fs::path(GAUSSPID_DATA_DIR) / "models" / "example3.json");
    EXPECT_EQ(ex3.labels(), (std::vector<std::string>{"X", "Y", "Z"}));
    EXPECT_TRUE(ex3.coefficients()[0].isApprox(testing::example3(1, 1, 0).coefficients()[0], 1e-15));
    EXPECT_NO_THROW((void)load_model(fs::path(GAUSSPID_DATA_DIR) / "models" / "example1.json"));
    EXPECT_NO_THROW((void)load_model(fs::path(GAUSSPID_DATA_DIR) / "models" / "example2.json"));
}

TEST(ModelJson, FlatMatricesAndErrors) {
    const MvarModel m = parse_model_json(R"({"coefficients": [[0.5, 0.5, 0, 0]], "noise_cov": [1, 0, 0, 1]})");
    EXPECT_EQ(m.coefficients()[0](0, 1), 0.5);
    EXPECT_EQ(m.coefficients()[0](1, 0), 0.0);
    EXPECT_EQ(m.variables(), 2u);

    EXPECT_EQ(code_of([] { (void)parse_model_json("{"); }), ErrorCode::kParseError);
    EXPECT_EQ(code_of([] { (void)parse_model_json(R"({"noise_cov": [[1]]})"); }), ErrorCode::kParseError);
    EXPECT_EQ(code_of([] { (void)parse_model_json(R"({"order": 2, "coefficients": [[[0.1]]], "noise_cov": [[1]]})"); }),
              ErrorCode::kParseError);
    EXPECT_EQ(code_of([] { (void)parse_model_json(R"({"coefficients": [[[0.1, 0]]], "noise_cov": [[1]]})"); }),
              ErrorCode::kParseError);
    EXPECT_EQ(code_of([] { (void)parse_model_json(R"({"coefficients": [[[1.2]]], "noise_cov": [[1]]})"); }),
              ErrorCode::kUnstableModel);
    EXPECT_EQ(code_of([] { (void)load_model("/nonexistent/model.json"); }), ErrorCode::kIoError);
}

TEST(CovarianceFiles, CsvAndJson) {
    const fs::path csv = temp_file("cov.csv", "X,Y,Z\n1,0.5,0.3\n0.5,1,0.2\n0.3,0.2,1\n");
    const CovarianceMatrix a = load_covariance(csv);
    EXPECT_EQ(a.labels(), (std::vector<std::string>{"X", "Y", "Z"}));
    EXPECT_EQ(a(0, 2), 0.3);

    const fs::path json = temp_file("cov.json", R"({"labels": ["p", "q"], "matrix": [[2, 0.5], [0.5, 1]]})");
    const CovarianceMatrix b = load_covariance(json);
    EXPECT_EQ(b.labels()[1], "q");
    EXPECT_EQ(b(0, 0), 2.0);

    const fs::path ragged = temp_file("bad.csv", "X,Y\n1,0.5\n");
    EXPECT_EQ(code_of([&] { (void)load_covariance(ragged); }), ErrorCode::kParseError);
    const fs::path indefinite = temp_file("neg.json", R"({"matrix": [[1, 2], [2, 1]]})");
    EXPECT_EQ(code_of([&] { (void)load_covariance(indefinite); }), ErrorCode::kNotPositiveDefinite);
    for (const auto& p : {csv, json, ragged, indefinite}) fs::remove(p);
}

}  // namespace
}  // namespace gausspid
