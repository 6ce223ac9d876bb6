#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace gausspid::cli {

inline constexpr int kSchemaVersion = 1;

struct CommonOptions {
    std::string unit = "nats";
    double tol = 1e-10;
    unsigned threads = 0;
};

struct PidStaticOptions {
    CommonOptions common;
    std::optional<double> a, b, c;
    std::string cov_file;
    std::string target;
    std::string source1;
    std::string source2;
};

struct SweepOptions {
    CommonOptions common;
    double a = 0.5;
    double c = 0.5;
    double b_min = -0.99;
    double b_max = 0.99;
    std::size_t steps = 199;
    std::string format = "csv";
};

struct PidDynamicOptions {
    CommonOptions common;
    std::string model_file;
    std::string target;
    std::string source_a;
    std::string source_b;
    std::string lags = "1";
};

struct TeOptions {
    CommonOptions common;
    std::string model_file;
    std::string data_file;
    std::string source;
    std::string target;
    std::vector<std::string> cond;
    std::string lags = "1";
    std::optional<std::size_t> target_lags;
    bool granger = false;
};

struct ComplexityOptions {
    CommonOptions common;
    std::string model_file;
    std::string lags = "inf";
};

struct VerifyMmiOptions {
    CommonOptions common;
    std::vector<std::size_t> n{1};
    std::vector<std::size_t> p{1};
    std::size_t trials = 10;
    std::uint64_t seed = 1;
    double max_gap = 1e-5;
    std::string format = "json";
};

struct SimulateOptions {
    std::string model_file;
    std::size_t steps = 1000;
    std::uint64_t seed = 1;
    std::size_t burn_in = 1000;
    std::string out = "-";
};

struct FitOptions {
    std::string data_file;
    std::size_t order = 1;
    std::string out = "-";
};

// Each command writes its result to `out` and returns the process exit code.
// Library errors propagate as gausspid::Error.
int run_pid_static(const PidStaticOptions& o, std::ostream& out);
int run_sweep(const SweepOptions& o, std::ostream& out);
int run_pid_dynamic(const PidDynamicOptions& o, std::ostream& out);
int run_te(const TeOptions& o, std::ostream& out);
int run_complexity(const ComplexityOptions& o, std::ostream& out);
int run_verify_mmi(const VerifyMmiOptions& o, std::ostream& out);
int run_simulate(const SimulateOptions& o, std::ostream& out);
int run_fit(const FitOptions& o, std::ostream& out);

}  // namespace gausspid::cli
