#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <gausspid/errors.hpp>
#include <iostream>
#include <string>

#include "commands.hpp"

namespace {

using namespace gausspid::cli;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("gausspid");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("GAUSSPID_LOG")) {
        const std::string level = env;
        if (level == "error" || level == "warn" || level == "info" || level == "debug") {
            spdlog::set_level(spdlog::level::from_str(level));
        } else {
            spdlog::warn("ignoring GAUSSPID_LOG='{}'; expected error, warn, info or debug", level);
        }
    }
}

void add_common(CLI::App* cmd, CommonOptions& c, bool with_tol = true) {
    cmd->add_option("--unit", c.unit, "nats or bits")->check(CLI::IsMember({"nats", "bits"}));
    if (with_tol) cmd->add_option("--tol", c.tol, "relative tolerance for infinite lags");
    cmd->add_option("--threads", c.threads, "worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();

    CLI::App app{"Partial information decomposition and information dynamics for Gaussian systems"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "gausspid 0.1.0");

    PidStaticOptions pid_static;
    auto* c_pid = app.add_subcommand("pid-static", "MMI decomposition of a static Gaussian triplet");
    add_common(c_pid, pid_static.common, false);
    c_pid->add_option("--a", pid_static.a, "corr(X,Y)");
    c_pid->add_option("--b", pid_static.b, "corr(Y,Z)");
    c_pid->add_option("--c", pid_static.c, "corr(X,Z)");
    c_pid->add_option("--cov", pid_static.cov_file, "covariance file (CSV with header, or JSON)");
    c_pid->add_option("--target", pid_static.target, "target columns, comma separated");
    c_pid->add_option("--source1", pid_static.source1, "first source columns");
    c_pid->add_option("--source2", pid_static.source2, "second source columns");

    SweepOptions sweep;
    auto* c_sweep = app.add_subcommand("sweep", "WMS and MMI PID along a grid of source correlations b");
    add_common(c_sweep, sweep.common, false);
    c_sweep->add_option("--a", sweep.a, "corr(X,Y)")->required();
    c_sweep->add_option("--c", sweep.c, "corr(X,Z)")->required();
    c_sweep->add_option("--b-min", sweep.b_min);
    c_sweep->add_option("--b-max", sweep.b_max);
    c_sweep->add_option("--steps", sweep.steps, "number of grid points");
    c_sweep->add_option("--format", sweep.format)->check(CLI::IsMember({"csv", "json"}));

    PidDynamicOptions pid_dyn;
    auto* c_dyn = app.add_subcommand("pid-dynamic", "MMI decomposition of a present variable against two pasts");
    add_common(c_dyn, pid_dyn.common);
    c_dyn->add_option("--model", pid_dyn.model_file)->required();
    c_dyn->add_option("--target", pid_dyn.target)->required();
    c_dyn->add_option("--sourceA", pid_dyn.source_a)->required();
    c_dyn->add_option("--sourceB", pid_dyn.source_b)->required();
    c_dyn->add_option("--lags", pid_dyn.lags, "N or inf");

    TeOptions te;
    auto* c_te = app.add_subcommand("te", "transfer entropy and Granger causality");
    add_common(c_te, te.common);
    auto* te_model = c_te->add_option("--model", te.model_file);
    auto* te_data = c_te->add_option("--data", te.data_file, "CSV time series");
    te_model->excludes(te_data);
    c_te->add_option("--source", te.source)->required();
    c_te->add_option("--target", te.target)->required();
    c_te->add_option("--cond", te.cond, "conditioning variables")->delimiter(',');
    c_te->add_option("--lags", te.lags, "N or inf");
    c_te->add_option("--target-lags", te.target_lags, "length of the target's own history (finite lags only)");
    c_te->add_flag("--granger", te.granger, "also report Granger causality");

    ComplexityOptions cx;
    auto* c_cx = app.add_subcommand("complexity", "causal density, global TE and synergistic complexity");
    add_common(c_cx, cx.common);
    c_cx->add_option("--model", cx.model_file)->required();
    c_cx->add_option("--lags", cx.lags, "N or inf");

    VerifyMmiOptions vm;
    auto* c_vm = app.add_subcommand("verify-mmi", "check the union-information optimum numerically");
    add_common(c_vm, vm.common, false);
    c_vm->add_option("--n", vm.n, "source-1 dimensions, comma separated")->delimiter(',');
    c_vm->add_option("--p", vm.p, "source-2 dimensions, comma separated")->delimiter(',');
    c_vm->add_option("--trials", vm.trials, "trials per (n, p) pair");
    c_vm->add_option("--seed", vm.seed);
    c_vm->add_option("--max-gap", vm.max_gap, "largest tolerated |gap| in nats");
    c_vm->add_option("--format", vm.format)->check(CLI::IsMember({"csv", "json"}));

    SimulateOptions sim;
    auto* c_sim = app.add_subcommand("simulate", "sample path of an MVAR model");
    c_sim->add_option("--model", sim.model_file)->required();
    c_sim->add_option("--steps", sim.steps)->required();
    c_sim->add_option("--seed", sim.seed);
    c_sim->add_option("--burn-in", sim.burn_in);
    c_sim->add_option("--out", sim.out, "CSV path or - for stdout");

    FitOptions fit;
    auto* c_fit = app.add_subcommand("fit", "least-squares MVAR fit of a CSV time series");
    c_fit->add_option("--data", fit.data_file)->required();
    c_fit->add_option("--order", fit.order)->required();
    c_fit->add_option("--out", fit.out, "model JSON path or - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*c_pid) return run_pid_static(pid_static, std::cout);
        if (*c_sweep) return run_sweep(sweep, std::cout);
        if (*c_dyn) return run_pid_dynamic(pid_dyn, std::cout);
        if (*c_te) return run_te(te, std::cout);
        if (*c_cx) return run_complexity(cx, std::cout);
        if (*c_vm) return run_verify_mmi(vm, std::cout);
        if (*c_sim) return run_simulate(sim, std::cout);
        if (*c_fit) return run_fit(fit, std::cout);
    } catch (const gausspid::Error& e) {
        spdlog::error("{}", e.what());
        switch (gausspid::category(e.code())) {
            case gausspid::ErrorCategory::kValidation: return kExitValidation;
            case gausspid::ErrorCategory::kNumerical: return kExitNumerical;
            case gausspid::ErrorCategory::kIo: return kExitIo;
        }
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kExitNumerical;
    }
    return kExitValidation;
}
