#include "gausspid/infodynamics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "gausspid/errors.hpp"
#include "gausspid/gaussian.hpp"

namespace gausspid {

LagSpec LagSpec::finite(std::size_t lags) {
    if (lags == 0) throw Error(ErrorCode::kInvalidArgument, "lag count must be at least 1");
    LagSpec s;
    s.lags_ = lags;
    return s;
}

LagSpec LagSpec::infinite(double tol) {
    if (!(tol > 0.0 && tol <= 1e-4)) {
        throw Error(ErrorCode::kInvalidArgument, "infinite-lag tolerance must lie in (0, 1e-4]");
    }
    LagSpec s;
    s.infinite_ = true;
    s.lags_ = 0;
    s.tol_ = tol;
    return s;
}

LagSpec LagSpec::parse(std::string_view text, double tol) {
    if (text == "inf" || text == "infinite") return infinite(tol);
    std::size_t lags = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), lags);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::kInvalidArgument, "lags must be a positive integer or 'inf', got '" + std::string(text) + "'");
    }
    return finite(lags);
}

std::string LagSpec::to_string() const {
    if (!infinite_) return std::to_string(lags_);
    std::ostringstream s;
    s << "inf(tol=" << tol_ << ")";
    return s.str();
}

void FlowQuery::validate(const MvarModel& m) const {
    const auto k = m.variables();
    if (source >= k || target >= k) throw Error(ErrorCode::kInvalidArgument, "source or target out of range");
    if (source == target) throw Error(ErrorCode::kInvalidArgument, "source and target must differ");
    for (auto c : conditionals) {
        if (c >= k) throw Error(ErrorCode::kInvalidArgument, "conditional variable out of range");
        if (c == source || c == target) {
            throw Error(ErrorCode::kInvalidArgument, "conditionals must exclude the source and the target");
        }
    }
    auto sorted = conditionals;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error(ErrorCode::kInvalidArgument, "duplicate conditional variable");
    }
    if (target_lags && (*target_lags == 0 || lags.is_infinite())) {
        throw Error(ErrorCode::kInvalidArgument, "target_lags needs finite lags and must be positive");
    }
}

std::vector<ConditionalVariance> conditional_variances(const MvarModel& m, std::size_t target,
                                                       const std::vector<std::vector<std::size_t>>& sets,
                                                       const LagSpec& lags, std::optional<std::size_t> target_lags) {
    if (lags.is_infinite()) return converge_conditional_variances(m, target, sets, lags.tolerance());

    const std::size_t own = target_lags.value_or(lags.lags());
    const std::size_t widest = std::max(own, lags.lags());
    const auto gammas = autocovariances(m, widest);
    std::vector<ConditionalVariance> out;
    out.reserve(sets.size());
    for (const auto& set : sets) {
        std::vector<PastBlock> blocks;
        for (auto v : set) blocks.push_back({v, v == target ? own : lags.lags()});
        const Eigen::MatrixXd cov = selected_history_covariance(gammas, target, blocks);
        if (static_cast<std::size_t>(cov.rows()) > kMaxHistoryDimension) {
            throw Error(ErrorCode::kDimensionCap, "history selection exceeds the dimension cap");
        }
        std::vector<std::size_t> given(static_cast<std::size_t>(cov.rows()) - 1);
        for (std::size_t i = 0; i < given.size(); ++i) given[i] = i + 1;
        try {
            out.push_back({linalg::conditional_variance(cov, 0, given), lags.lags()});
        } catch (const Error& e) {
            throw Error(ErrorCode::kSingularHistory, e.what());
        }
    }
    return out;
}

namespace {

struct FlowVariances {
    double restricted;
    double full;
    std::size_t lags_used;
};

FlowVariances flow_variances(const MvarModel& m, const FlowQuery& q) {
    q.validate(m);
    std::vector<std::size_t> restricted{q.target};
    restricted.insert(restricted.end(), q.conditionals.begin(), q.conditionals.end());
    std::vector<std::size_t> full = restricted;
    full.push_back(q.source);
    const auto v = conditional_variances(m, q.target, {restricted, full}, q.lags, q.target_lags);
    return {v[0].variance, v[1].variance, std::max(v[0].lags_used, v[1].lags_used)};
}

double log_ratio_nats(double numerator, double denominator, std::string_view what) {
    if (!(numerator > 0.0) || !(denominator > 0.0)) {
        throw Error(ErrorCode::kSingularHistory, std::string(what) + ": non-positive residual variance");
    }
    return 0.5 * std::log(numerator / denominator);
}

}  // namespace

FlowResult transfer_entropy(const MvarModel& m, const FlowQuery& q) {
    const auto v = flow_variances(m, q);
    const double te = clamp_information(log_ratio_nats(v.restricted, v.full, "transfer entropy"), "transfer entropy");
    return {InfoValue::from_nats(te, q.unit), v.lags_used};
}

FlowResult conditional_transfer_entropy(const MvarModel& m, const FlowQuery& q) {
    if (q.conditionals.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "conditional transfer entropy needs at least one conditional");
    }
    return transfer_entropy(m, q);
}

GrangerResult granger_causality(const MvarModel& m, const FlowQuery& q) {
    const auto v = flow_variances(m, q);
    const double te = clamp_information(log_ratio_nats(v.restricted, v.full, "Granger causality"), "Granger causality");
    return {2.0 * te, v.lags_used};
}

FlowResult lagged_mutual_information(const MvarModel& m, std::size_t source, std::size_t target, const LagSpec& lags,
                                     InfoUnit unit) {
    if (source >= m.variables() || target >= m.variables()) {
        throw Error(ErrorCode::kInvalidArgument, "source or target out of range");
    }
    const auto v = conditional_variances(m, target, {{}, {source}}, lags);
    const double mi = clamp_information(log_ratio_nats(v[0].variance, v[1].variance, "lagged MI"), "lagged MI");
    return {InfoValue::from_nats(mi, unit), v[1].lags_used};
}

DynamicPidResult dynamic_mmi_pid(const MvarModel& m, std::size_t target, std::size_t source_a, std::size_t source_b,
                                 const LagSpec& lags, InfoUnit unit) {
    const auto k = m.variables();
    if (target >= k || source_a >= k || source_b >= k) {
        throw Error(ErrorCode::kInvalidArgument, "variable out of range");
    }
    if (source_a == source_b) throw Error(ErrorCode::kOverlappingBlocks, "the two sources must be different variables");

    if (!lags.is_infinite()) {
        const std::size_t l = lags.lags();
        const HistoryCovariance h = history_covariance(m, l);
        const GaussianTriplet t(h.joint(), h.block(target, 0), h.history(source_a, 1, l), h.history(source_b, 1, l));
        return {mmi_pid(t, unit), l};
    }

    const auto v = conditional_variances(m, target, {{}, {source_a}, {source_b}, {source_a, source_b}}, lags);
    const double var = v[0].variance;
    const double mi_a = clamp_information(log_ratio_nats(var, v[1].variance, "I(X;A)"), "I(X;A)");
    const double mi_b = clamp_information(log_ratio_nats(var, v[2].variance, "I(X;B)"), "I(X;B)");
    const double mi_ab = clamp_information(log_ratio_nats(var, v[3].variance, "I(X;A,B)"), "I(X;A,B)");
    std::size_t used = 0;
    for (const auto& c : v) used = std::max(used, c.lags_used);
    return {mmi_pid_from_informations(mi_a, mi_b, mi_ab, unit), used};
}

}  // namespace gausspid
