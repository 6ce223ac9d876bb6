#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <gausspid/complexity.hpp>
#include <gausspid/gaussian.hpp>
#include <gausspid/infodynamics.hpp>
#include <gausspid/mvar.hpp>
#include <gausspid/pid.hpp>
#include <gausspid/union_information.hpp>
#include <random>

namespace {

using namespace gausspid;

CovarianceMatrix random_covariance(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> n01;
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd g(d, 2 * d);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = n01(gen);
    return CovarianceMatrix(g * g.transpose() / static_cast<double>(2 * d) + 0.1 * Eigen::MatrixXd::Identity(d, d));
}

// Three drivers feeding one target with correlated innovations.
MvarModel coupled_model(double rho) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
    a(0, 1) = 0.8;
    a(0, 2) = 1.2;
    Eigen::MatrixXd q = Eigen::MatrixXd::Identity(3, 3);
    q(1, 2) = q(2, 1) = rho;
    return MvarModel({a}, CovarianceMatrix(q));
}

MvarModel random_model(std::size_t k, std::size_t p, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> n01;
    const auto d = static_cast<Eigen::Index>(k);
    std::vector<Eigen::MatrixXd> coeffs(p, Eigen::MatrixXd(d, d));
    for (auto& c : coeffs)
        for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = n01(gen);
    // Lag j scaled by s^j scales every companion eigenvalue by s.
    const double scale = 0.8 / companion_spectral_radius(coeffs);
    double f = 1.0;
    for (auto& c : coeffs) c *= (f *= scale);
    return MvarModel(coeffs, CovarianceMatrix(Eigen::MatrixXd::Identity(d, d)));
}

void BM_MutualInformation(benchmark::State& state) {
    const auto half = static_cast<std::size_t>(state.range(0));
    const CovarianceMatrix cov = random_covariance(2 * half, 1);
    const BlockIndex x = BlockIndex::range(0, half);
    const BlockIndex y = BlockIndex::range(half, half);
    for (auto _ : state) benchmark::DoNotOptimize(mutual_information(cov, x, y));
}
BENCHMARK(BM_MutualInformation)->Arg(1)->Arg(4)->Arg(16)->Arg(64);

void BM_MmiPidStatic(benchmark::State& state) {
    const GaussianTriplet t = TripletSpec{0.5, 0.3, 0.7}.triplet();
    for (auto _ : state) benchmark::DoNotOptimize(mmi_pid(t));
}
BENCHMARK(BM_MmiPidStatic);

void BM_Sweep(benchmark::State& state) {
    const std::vector<double> grid = linspace(-0.99, 0.99, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sweep_univariate(0.25, 0.75, grid));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sweep)->Arg(199)->Arg(2001);

void BM_UnionMinimize(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const MarginalConstraints mc = random_constraints(n, n, 3);
    for (auto _ : state) benchmark::DoNotOptimize(minimize_union_information(mc));
}
BENCHMARK(BM_UnionMinimize)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_StationaryCovariance(benchmark::State& state) {
    const MvarModel m = random_model(static_cast<std::size_t>(state.range(0)), 2, 5);
    for (auto _ : state) benchmark::DoNotOptimize(stationary_covariance(m));
}
BENCHMARK(BM_StationaryCovariance)->Arg(2)->Arg(3)->Arg(4)->Arg(6)->Arg(8)->Arg(20)->Unit(benchmark::kMicrosecond);

void BM_InfinitePastConditionalVariance(benchmark::State& state) {
    const MvarModel m = coupled_model(0.5);
    for (auto _ : state) benchmark::DoNotOptimize(infinite_past_conditional_variance(m, 0, {1, 2}));
}
BENCHMARK(BM_InfinitePastConditionalVariance)->Unit(benchmark::kMicrosecond);

void BM_TransferEntropy(benchmark::State& state) {
    const MvarModel m = coupled_model(0.5);
    FlowQuery q;
    q.source = 1;
    q.target = 0;
    q.conditionals = {2};
    q.lags = LagSpec::finite(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(transfer_entropy(m, q));
}
BENCHMARK(BM_TransferEntropy)->Arg(1)->Arg(8)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_ComplexityReport(benchmark::State& state) {
    const MvarModel m = random_model(static_cast<std::size_t>(state.range(0)), 1, 9);
    for (auto _ : state) benchmark::DoNotOptimize(complexity_report(m, LagSpec::finite(2)));
}
BENCHMARK(BM_ComplexityReport)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
