#include "gausspid/complexity.hpp"

#include <algorithm>
#include <cmath>

#include "gausspid/errors.hpp"
#include "gausspid/parallel.hpp"
#include "gausspid/pid.hpp"

namespace gausspid {
namespace {

void require_variables(const MvarModel& m, std::size_t minimum, const char* what) {
    if (m.variables() < minimum) {
        throw Error(ErrorCode::kInvalidArgument,
                    std::string(what) + " needs at least " + std::to_string(minimum) + " variables");
    }
}

std::vector<std::size_t> all_except(std::size_t n, std::initializer_list<std::size_t> skip) {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < n; ++v) {
        if (std::find(skip.begin(), skip.end(), v) == skip.end()) out.push_back(v);
    }
    return out;
}

ComplexityMeasure aggregate(std::vector<ComplexityTerm> terms, double normalization, InfoUnit unit) {
    ComplexityMeasure out;
    out.normalization = normalization;
    double sum = 0.0;
    for (const auto& t : terms) {
        sum += t.value;
        out.lags_used = std::max(out.lags_used, t.lags_used);
    }
    out.value = {normalization * sum, unit};
    out.terms = std::move(terms);
    return out;
}

}  // namespace

ComplexityMeasure causal_density(const MvarModel& m, const LagSpec& lags, InfoUnit unit, unsigned threads) {
    require_variables(m, 2, "causal density");
    const auto n = m.variables();
    std::vector<ComplexityTerm> terms;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) terms.push_back({i, j, std::nullopt, 0.0, 0});
        }
    }
    parallel_for(terms.size(), threads, [&](std::size_t idx) {
        auto& t = terms[idx];
        FlowQuery q;
        q.source = t.source;
        q.target = t.target;
        q.conditionals = all_except(n, {t.source, t.target});
        q.lags = lags;
        const auto g = granger_causality(m, q);
        t.value = convert_nats(g.value, unit);
        t.lags_used = g.lags_used;
    });
    return aggregate(std::move(terms), 1.0 / static_cast<double>(n * (n - 1)), unit);
}

ComplexityMeasure global_transfer_entropy(const MvarModel& m, const LagSpec& lags, InfoUnit unit, unsigned threads) {
    require_variables(m, 2, "global transfer entropy");
    const auto n = m.variables();
    std::vector<std::size_t> everyone(n);
    for (std::size_t v = 0; v < n; ++v) everyone[v] = v;
    std::vector<ComplexityTerm> terms(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const auto v = conditional_variances(m, i, {{i}, everyone}, lags);
        const double nats = clamp_information(0.5 * std::log(v[0].variance / v[1].variance), "global transfer entropy");
        terms[i] = {i, i, std::nullopt, convert_nats(nats, unit), std::max(v[0].lags_used, v[1].lags_used)};
    });
    return aggregate(std::move(terms), 1.0 / static_cast<double>(n), unit);
}

ComplexityMeasure synergistic_complexity(const MvarModel& m, const LagSpec& lags, InfoUnit unit, unsigned threads) {
    require_variables(m, 3, "synergistic complexity");
    const auto n = m.variables();
    std::vector<ComplexityTerm> terms;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                if (j != i && k != i) terms.push_back({i, j, k, 0.0, 0});
            }
        }
    }
    parallel_for(terms.size(), threads, [&](std::size_t idx) {
        auto& t = terms[idx];
        const auto pid = dynamic_mmi_pid(m, t.target, t.source, *t.source2, lags, unit);
        t.value = pid.pid.synergy.value;
        t.lags_used = pid.lags_used;
    });
    return aggregate(std::move(terms), 2.0 / static_cast<double>(n * (n - 1) * (n - 2)), unit);
}

ComplexityReport complexity_report(const MvarModel& m, const LagSpec& lags, InfoUnit unit, unsigned threads) {
    ComplexityReport r;
    r.n_vars = m.variables();
    r.lags = lags;
    r.unit = unit;
    r.causal_density = causal_density(m, lags, unit, threads);
    r.global_te = global_transfer_entropy(m, lags, unit, threads);
    if (r.n_vars >= 3) r.synergistic_complexity = synergistic_complexity(m, lags, unit, threads);
    r.lags_used = std::max(r.causal_density.lags_used, r.global_te.lags_used);
    if (r.synergistic_complexity) r.lags_used = std::max(r.lags_used, r.synergistic_complexity->lags_used);
    return r;
}

}  // namespace gausspid
