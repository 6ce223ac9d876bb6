#include "commands.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <gausspid/complexity.hpp>
#include <gausspid/dataset.hpp>
#include <gausspid/errors.hpp>
#include <gausspid/gaussian.hpp>
#include <gausspid/infodynamics.hpp>
#include <gausspid/model_io.hpp>
#include <gausspid/pid.hpp>
#include <gausspid/union_information.hpp>
#include <json.hpp>
#include <memory>

namespace gausspid::cli {
namespace {

using nlohmann::ordered_json;

ordered_json envelope(std::string_view command, std::optional<InfoUnit> unit, std::optional<std::size_t> lags_used) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["unit"] = unit ? ordered_json(std::string(to_string(*unit))) : ordered_json(nullptr);
    j["lags_used"] = lags_used ? ordered_json(*lags_used) : ordered_json(nullptr);
    return j;
}

void emit(std::ostream& out, const ordered_json& j) { out << j.dump(2) << '\n'; }

std::string number(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

std::string_view weaker_name(WeakerSource w) {
    switch (w) {
        case WeakerSource::kSource1: return "source1";
        case WeakerSource::kSource2: return "source2";
        case WeakerSource::kTie: return "tie";
    }
    return "tie";
}

ordered_json pid_json(const PidResult& p) {
    ordered_json j;
    j["redundancy"] = p.redundancy.value;
    j["unique_source1"] = p.unique_source1.value;
    j["unique_source2"] = p.unique_source2.value;
    j["synergy"] = p.synergy.value;
    j["mi_source1"] = p.mi_source1.value;
    j["mi_source2"] = p.mi_source2.value;
    j["mi_joint"] = p.mi_joint.value;
    j["wms"] = p.wms.value;
    j["weaker_source"] = weaker_name(p.weaker_source);
    return j;
}

std::size_t parse_index(std::string_view text, std::size_t count, std::string_view what) {
    std::size_t idx = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), idx);
    if (ec != std::errc() || ptr != text.data() + text.size() || idx >= count) {
        throw Error(ErrorCode::kInvalidArgument, "unknown " + std::string(what) + " '" + std::string(text) + "'");
    }
    return idx;
}

std::size_t resolve(const std::vector<std::string>& labels, std::size_t count, std::string_view name,
                    std::string_view what) {
    const auto it = std::find(labels.begin(), labels.end(), name);
    if (it != labels.end()) return static_cast<std::size_t>(it - labels.begin());
    return parse_index(name, count, what);
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        if (item.empty()) throw Error(ErrorCode::kInvalidArgument, "empty entry in list '" + std::string(text) + "'");
        out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

BlockIndex resolve_block(const CovarianceMatrix& cov, std::string_view list, std::string_view what) {
    if (list.empty()) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " is required with --cov");
    std::vector<std::size_t> idx;
    for (const auto& name : split_list(list)) idx.push_back(resolve(cov.labels(), cov.dim(), name, what));
    return BlockIndex(idx);
}

std::vector<std::string> names_of(const std::vector<std::string>& labels, const BlockIndex& b) {
    std::vector<std::string> out;
    for (auto i : b) out.push_back(i < labels.size() ? labels[i] : std::to_string(i));
    return out;
}

/// Opens `path` for writing, or returns nullptr for "-" (stdout).
std::unique_ptr<std::ofstream> open_output(const std::string& path) {
    if (path == "-") return nullptr;
    auto f = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*f) throw Error(ErrorCode::kIoError, "cannot write " + path);
    return f;
}

ordered_json measure_json(const ComplexityMeasure& m, const std::vector<std::string>& labels) {
    ordered_json j;
    j["value"] = m.value.value;
    j["normalization"] = m.normalization;
    j["lags_used"] = m.lags_used;
    ordered_json terms = ordered_json::array();
    for (const auto& t : m.terms) {
        ordered_json row;
        row["target"] = labels[t.target];
        if (t.source2) {
            row["sources"] = {labels[t.source], labels[*t.source2]};
        } else {
            row["source"] = labels[t.source];
        }
        row["value"] = t.value;
        row["lags_used"] = t.lags_used;
        terms.push_back(std::move(row));
    }
    j["terms"] = std::move(terms);
    return j;
}

}  // namespace

int run_pid_static(const PidStaticOptions& o, std::ostream& out) {
    const InfoUnit unit = parse_info_unit(o.common.unit);
    const bool closed_form = o.a || o.b || o.c;
    if (closed_form == !o.cov_file.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "give either --a/--b/--c or --cov");
    }
    ordered_json j = envelope("pid-static", unit, std::nullopt);
    std::optional<GaussianTriplet> triplet;
    if (closed_form) {
        if (!o.a || !o.b || !o.c) throw Error(ErrorCode::kInvalidArgument, "--a, --b and --c are all required");
        const TripletSpec spec{*o.a, *o.b, *o.c};
        spec.validate();
        triplet.emplace(spec.triplet());
        j["input"] = {{"a", spec.a}, {"b", spec.b}, {"c", spec.c}};
    } else {
        const CovarianceMatrix cov = load_covariance(o.cov_file);
        auto target = resolve_block(cov, o.target, "--target");
        auto s1 = resolve_block(cov, o.source1, "--source1");
        auto s2 = resolve_block(cov, o.source2, "--source2");
        j["input"] = {{"cov", o.cov_file},
                      {"target", names_of(cov.labels(), target)},
                      {"source1", names_of(cov.labels(), s1)},
                      {"source2", names_of(cov.labels(), s2)}};
        triplet.emplace(cov, std::move(target), std::move(s1), std::move(s2));
    }
    const PidResult pid = mmi_pid(*triplet, unit);
    j["pid"] = pid_json(pid);
    j["wms_sigma"] = triplet->target().size() == 1 ? ordered_json(net_synergy_sigma(*triplet)) : ordered_json(nullptr);
    emit(out, j);
    return 0;
}

int run_sweep(const SweepOptions& o, std::ostream& out) {
    const InfoUnit unit = parse_info_unit(o.common.unit);
    if (o.steps < 2) throw Error(ErrorCode::kInvalidArgument, "--steps must be at least 2");
    if (!(o.b_min < o.b_max)) throw Error(ErrorCode::kInvalidArgument, "--b-min must be below --b-max");
    const auto grid = linspace(o.b_min, o.b_max, o.steps);
    const SweepTable table = sweep_univariate(o.a, o.c, grid, unit, o.common.threads);
    if (!table.skipped.empty()) {
        spdlog::info("sweep skipped {} of {} b values outside the valid region", table.skipped.size(), grid.size());
    }
    if (o.format == "csv") {
        out << "b,wms,wms_sigma,redundancy,unique_y,unique_z,synergy\n";
        for (const auto& r : table.rows) {
            out << number(r.b) << ',' << number(r.wms) << ',' << number(r.wms_sigma) << ',' << number(r.redundancy)
                << ',' << number(r.unique_y) << ',' << number(r.unique_z) << ',' << number(r.synergy) << '\n';
        }
        return 0;
    }
    if (o.format != "json") throw Error(ErrorCode::kInvalidArgument, "--format must be csv or json");
    ordered_json j = envelope("sweep", unit, std::nullopt);
    j["a"] = o.a;
    j["c"] = o.c;
    j["skipped"] = table.skipped;
    ordered_json rows = ordered_json::array();
    for (const auto& r : table.rows) {
        rows.push_back({{"b", r.b},
                        {"wms", r.wms},
                        {"wms_sigma", r.wms_sigma},
                        {"redundancy", r.redundancy},
                        {"unique_y", r.unique_y},
                        {"unique_z", r.unique_z},
                        {"synergy", r.synergy}});
    }
    j["rows"] = std::move(rows);
    emit(out, j);
    return 0;
}

int run_pid_dynamic(const PidDynamicOptions& o, std::ostream& out) {
    const InfoUnit unit = parse_info_unit(o.common.unit);
    const LagSpec lags = LagSpec::parse(o.lags, o.common.tol);
    const MvarModel m = load_model(o.model_file);
    const auto target = m.variable(o.target);
    const auto a = m.variable(o.source_a);
    const auto b = m.variable(o.source_b);
    const auto r = dynamic_mmi_pid(m, target, a, b, lags, unit);
    ordered_json j = envelope("pid-dynamic", unit, r.lags_used);
    j["lags"] = lags.to_string();
    j["target"] = m.labels()[target];
    j["source_a"] = m.labels()[a];
    j["source_b"] = m.labels()[b];
    j["pid"] = pid_json(r.pid);
    emit(out, j);
    return 0;
}

int run_te(const TeOptions& o, std::ostream& out) {
    const InfoUnit unit = parse_info_unit(o.common.unit);
    const LagSpec lags = LagSpec::parse(o.lags, o.common.tol);
    if (o.model_file.empty() == o.data_file.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "give exactly one of --model or --data");
    }

    if (!o.model_file.empty()) {
        const MvarModel m = load_model(o.model_file);
        FlowQuery q;
        q.source = m.variable(o.source);
        q.target = m.variable(o.target);
        for (const auto& c : o.cond) q.conditionals.push_back(m.variable(c));
        q.lags = lags;
        q.unit = unit;
        q.target_lags = o.target_lags;
        const FlowResult te = transfer_entropy(m, q);
        ordered_json j = envelope("te", unit, te.lags_used);
        j["lags"] = lags.to_string();
        j["source"] = m.labels()[q.source];
        j["target"] = m.labels()[q.target];
        ordered_json conds = ordered_json::array();
        for (auto c : q.conditionals) conds.push_back(m.labels()[c]);
        j["conditionals"] = std::move(conds);
        j["transfer_entropy"] = te.value.value;
        if (o.granger) j["granger"] = granger_causality(m, q).value;
        emit(out, j);
        return 0;
    }

    if (lags.is_infinite()) throw Error(ErrorCode::kInvalidArgument, "te --data needs a finite --lags");
    const Dataset d = read_csv(o.data_file);
    const std::size_t l = lags.lags();
    const std::size_t own = o.target_lags.value_or(l);
    if (own == 0) throw Error(ErrorCode::kInvalidArgument, "--target-lags must be positive");
    const auto source = resolve(d.labels, d.variables(), o.source, "variable");
    const auto target = resolve(d.labels, d.variables(), o.target, "variable");
    if (source == target) throw Error(ErrorCode::kInvalidArgument, "source and target must differ");
    const EstimatedHistory est = estimate_covariance(d, std::max(l, own));
    const auto& h = est.history;
    BlockIndex given = h.history(target, 1, own);
    std::vector<std::string> cond_names;
    for (const auto& c : o.cond) {
        const auto v = resolve(d.labels, d.variables(), c, "variable");
        if (v == source || v == target) {
            throw Error(ErrorCode::kInvalidArgument, "conditionals must exclude the source and the target");
        }
        given = given.united(h.history(v, 1, l));
        cond_names.push_back(d.labels[v]);
    }
    const InfoValue te = conditional_mutual_information(h.joint(), h.block(target, 0), h.history(source, 1, l), given, unit);
    if (est.loading > 0.0) spdlog::warn("sample covariance needed diagonal loading of {} x trace/dim", est.loading);

    ordered_json j = envelope("te", unit, l);
    j["lags"] = lags.to_string();
    j["source"] = d.labels[source];
    j["target"] = d.labels[target];
    j["conditionals"] = cond_names;
    j["transfer_entropy"] = te.value;
    if (o.granger) j["granger"] = 2.0 * te.nats();
    j["estimation"] = {{"samples", d.steps()}, {"usable_rows", est.usable_rows}, {"diagonal_loading", est.loading}};
    emit(out, j);
    return 0;
}

int run_complexity(const ComplexityOptions& o, std::ostream& out) {
    const InfoUnit unit = parse_info_unit(o.common.unit);
    const LagSpec lags = LagSpec::parse(o.lags, o.common.tol);
    const MvarModel m = load_model(o.model_file);
    const ComplexityReport r = complexity_report(m, lags, unit, o.common.threads);
    ordered_json j = envelope("complexity", unit, r.lags_used);
    j["lags"] = lags.to_string();
    j["n_vars"] = r.n_vars;
    j["labels"] = m.labels();
    j["causal_density"] = measure_json(r.causal_density, m.labels());
    j["global_te"] = measure_json(r.global_te, m.labels());
    j["synergistic_complexity"] =
        r.synergistic_complexity ? measure_json(*r.synergistic_complexity, m.labels()) : ordered_json(nullptr);
    emit(out, j);
    return 0;
}

int run_verify_mmi(const VerifyMmiOptions& o, std::ostream& out) {
    const InfoUnit unit = parse_info_unit(o.common.unit);
    if (o.trials == 0) throw Error(ErrorCode::kInvalidArgument, "--trials must be at least 1");
    struct Row {
        std::size_t trial;
        MmiTrial t;
    };
    std::vector<Row> rows;
    std::uint64_t combo = 0;
    for (auto n : o.n) {
        for (auto p : o.p) {
            if (n == 0 || p == 0) throw Error(ErrorCode::kInvalidArgument, "--n and --p must be positive");
            OptimizerConfig cfg;
            cfg.seed = o.seed + 7919 * combo;
            const auto trials = verify_mmi(n, p, o.trials, o.seed + 104729 * combo, cfg, o.common.threads);
            for (std::size_t i = 0; i < trials.size(); ++i) rows.push_back({i, trials[i]});
            ++combo;
        }
    }

    double worst_opt = 0.0;
    double worst_con = 0.0;
    std::size_t failures = 0;
    bool all_converged = true;
    for (const auto& r : rows) {
        worst_opt = std::max(worst_opt, std::abs(r.t.optimizer_gap));
        worst_con = std::max(worst_con, std::abs(r.t.constructive_gap));
        all_converged = all_converged && r.t.converged;
        if (!(std::abs(r.t.optimizer_gap) <= o.max_gap)) ++failures;
    }
    if (failures) spdlog::error("{} of {} trials exceed the allowed gap {}", failures, rows.size(), o.max_gap);

    if (o.format == "csv") {
        out << "n,p,trial,theorem_value,optimizer_value,optimizer_gap,constructive_gap,converged,iterations\n";
        for (const auto& r : rows) {
            out << r.t.n << ',' << r.t.p << ',' << r.trial << ',' << number(convert_nats(r.t.theorem_value, unit)) << ','
                << number(convert_nats(r.t.optimizer_value, unit)) << ',' << number(r.t.optimizer_gap) << ','
                << number(r.t.constructive_gap) << ',' << (r.t.converged ? 1 : 0) << ',' << r.t.iterations << '\n';
        }
    } else if (o.format == "json") {
        ordered_json j = envelope("verify-mmi", unit, std::nullopt);
        j["seed"] = o.seed;
        j["max_gap_nats"] = o.max_gap;
        ordered_json trials = ordered_json::array();
        for (const auto& r : rows) {
            trials.push_back({{"n", r.t.n},
                              {"p", r.t.p},
                              {"trial", r.trial},
                              {"theorem_value", convert_nats(r.t.theorem_value, unit)},
                              {"optimizer_value", convert_nats(r.t.optimizer_value, unit)},
                              {"optimizer_gap_nats", r.t.optimizer_gap},
                              {"constructive_gap_nats", r.t.constructive_gap},
                              {"converged", r.t.converged},
                              {"iterations", r.t.iterations}});
        }
        j["trials"] = std::move(trials);
        j["summary"] = {{"count", rows.size()},
                        {"max_abs_optimizer_gap_nats", worst_opt},
                        {"max_abs_constructive_gap_nats", worst_con},
                        {"all_converged", all_converged},
                        {"failures", failures}};
        emit(out, j);
    } else {
        throw Error(ErrorCode::kInvalidArgument, "--format must be csv or json");
    }
    return failures ? 3 : 0;
}

int run_simulate(const SimulateOptions& o, std::ostream& out) {
    const MvarModel m = load_model(o.model_file);
    const Eigen::MatrixXd x = simulate(m, o.steps, o.seed, o.burn_in);
    auto file = open_output(o.out);
    write_csv(file ? *file : out, x, m.labels());
    if (file) {
        ordered_json j = envelope("simulate", std::nullopt, std::nullopt);
        j["steps"] = o.steps;
        j["seed"] = o.seed;
        j["burn_in"] = o.burn_in;
        j["out"] = o.out;
        emit(out, j);
    }
    return 0;
}

int run_fit(const FitOptions& o, std::ostream& out) {
    const Dataset d = read_csv(o.data_file);
    const FitResult r = fit_mvar(d, o.order);
    if (!r.stable) {
        spdlog::warn("fitted model is not stable (companion spectral radius {}); it cannot be analysed",
                     r.spectral_radius);
    }
    ordered_json model = ordered_json::parse(model_to_json(r.coefficients, r.noise_cov, r.labels));
    model["fit"] = {{"stable", r.stable},
                    {"spectral_radius", r.spectral_radius},
                    {"usable_rows", r.usable_rows},
                    {"intercept", std::vector<double>(r.intercept.data(), r.intercept.data() + r.intercept.size())}};
    auto file = open_output(o.out);
    if (!file) {
        emit(out, model);
        return 0;
    }
    emit(*file, model);
    if (!*file) throw Error(ErrorCode::kIoError, "failed writing " + o.out);
    ordered_json j = envelope("fit", std::nullopt, o.order);
    j["out"] = o.out;
    j["stable"] = r.stable;
    j["spectral_radius"] = r.spectral_radius;
    j["usable_rows"] = r.usable_rows;
    emit(out, j);
    return 0;
}

}  // namespace gausspid::cli
