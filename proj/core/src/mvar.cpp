#include "gausspid/mvar.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include "gausspid/errors.hpp"
#include "gausspid/gaussian.hpp"

namespace gausspid {

namespace {

// (I − A⊗A) has (kp)² rows; doubling already wins from six states up.
constexpr Eigen::Index kKroneckerLimit = 4;

Eigen::MatrixXd companion_of(const std::vector<Eigen::MatrixXd>& coefficients) {
    const auto k = coefficients.front().rows();
    const auto p = static_cast<Eigen::Index>(coefficients.size());
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k * p, k * p);
    for (Eigen::Index j = 0; j < p; ++j) c.block(0, j * k, k, k) = coefficients[static_cast<std::size_t>(j)];
    if (p > 1) c.block(k, 0, k * (p - 1), k * (p - 1)).setIdentity();
    return c;
}

// Stationary covariance of the stacked companion state (x_t, …, x_{t−p+1}).
Eigen::MatrixXd companion_stationary(const MvarModel& m) {
    const auto k = static_cast<Eigen::Index>(m.variables());
    const auto p = static_cast<Eigen::Index>(m.order());
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(k * p, k * p);
    q.topLeftCorner(k, k) = m.noise_cov().matrix();
    return solve_discrete_lyapunov(m.companion(), q);
}

double cov_entry(const std::vector<Eigen::MatrixXd>& gammas, std::size_t v1, std::size_t l1, std::size_t v2,
                 std::size_t l2) {
    const auto i1 = static_cast<Eigen::Index>(v1);
    const auto i2 = static_cast<Eigen::Index>(v2);
    // E[x_{t−l1} x_{t−l2}ᵀ] = Γ_{l2−l1} when l2 ≥ l1.
    if (l2 >= l1) return gammas[l2 - l1](i1, i2);
    return gammas[l1 - l2](i2, i1);
}

}  // namespace

MvarModel::MvarModel(std::vector<Eigen::MatrixXd> coefficients, CovarianceMatrix noise_cov,
                     std::vector<std::string> labels)
    : coefficients_(std::move(coefficients)), noise_cov_(std::move(noise_cov)), labels_(std::move(labels)) {
    if (coefficients_.empty()) throw Error(ErrorCode::kInvalidArgument, "model order must be at least 1");
    const auto k = static_cast<Eigen::Index>(noise_cov_.dim());
    for (const auto& a : coefficients_) {
        if (a.rows() != k || a.cols() != k) {
            throw Error(ErrorCode::kInvalidArgument, "coefficient matrices must be k x k with k = noise dimension");
        }
        if (!a.allFinite()) throw Error(ErrorCode::kInvalidArgument, "non-finite coefficient");
    }
    if (labels_.empty()) {
        if (!noise_cov_.labels().empty()) {
            labels_ = noise_cov_.labels();
        } else {
            for (Eigen::Index i = 0; i < k; ++i) labels_.push_back("V" + std::to_string(i));
        }
    }
    if (labels_.size() != static_cast<std::size_t>(k)) {
        throw Error(ErrorCode::kInvalidArgument, "label count does not match the number of variables");
    }
    spectral_radius_ = companion_spectral_radius(coefficients_);
    if (!(spectral_radius_ < 1.0 - kStabilityMargin)) {
        std::ostringstream msg;
        msg << "companion spectral radius " << spectral_radius_ << " is not below 1";
        throw Error(ErrorCode::kUnstableModel, msg.str());
    }
}

std::size_t MvarModel::variable(std::string_view name) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == name) return i;
    }
    std::size_t index = 0;
    const auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), index);
    if (ec == std::errc() && ptr == name.data() + name.size() && index < variables()) return index;
    throw Error(ErrorCode::kInvalidArgument, "unknown variable '" + std::string(name) + "'");
}

Eigen::MatrixXd MvarModel::companion() const { return companion_of(coefficients_); }

MvarModel MvarModel::permuted(const std::vector<std::size_t>& perm) const {
    const auto k = variables();
    if (perm.size() != k) throw Error(ErrorCode::kInvalidArgument, "permutation size mismatch");
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(perm.at(i))) = 1.0;
    std::vector<Eigen::MatrixXd> coeffs;
    for (const auto& a : coefficients_) coeffs.push_back(p * a * p.transpose());
    std::vector<std::string> labels;
    for (auto i : perm) labels.push_back(labels_.at(i));
    return MvarModel(std::move(coeffs), CovarianceMatrix(p * noise_cov_.matrix() * p.transpose(), labels), labels);
}

double companion_spectral_radius(const std::vector<Eigen::MatrixXd>& coefficients) {
    if (coefficients.empty()) return 0.0;
    Eigen::EigenSolver<Eigen::MatrixXd> eig(companion_of(coefficients), false);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q) {
    const auto n = a.rows();
    Eigen::MatrixXd x;
    if (n <= kKroneckerLimit) {
        // vec(A X Aᵀ) = (A ⊗ A) vec X with column-major vec.
        Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n * n, n * n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                for (Eigen::Index k = 0; k < n; ++k) {
                    for (Eigen::Index l = 0; l < n; ++l) system(i + j * n, k + l * n) -= a(i, k) * a(j, l);
                }
            }
        }
        const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(q.data(), n * n);
        const Eigen::VectorXd sol = system.partialPivLu().solve(rhs);
        x = Eigen::Map<const Eigen::MatrixXd>(sol.data(), n, n);
    } else {
        // X = Σ_j A^j Q A^jᵀ, summed by squaring: X ← X + A_k X A_kᵀ, A_k ← A_k².
        x = q;
        Eigen::MatrixXd ak = a;
        for (int it = 0; it < 64; ++it) {
            x += ak * x * ak.transpose();
            ak = ak * ak;
            if (ak.cwiseAbs().maxCoeff() < 1e-18) break;
        }
    }
    return 0.5 * (x + x.transpose());
}

CovarianceMatrix stationary_covariance(const MvarModel& m) {
    if (!(m.spectral_radius() < 1.0 - MvarModel::kStabilityMargin)) {
        throw Error(ErrorCode::kUnstableModel, "model is not stationary");
    }
    const auto k = static_cast<Eigen::Index>(m.variables());
    return CovarianceMatrix(companion_stationary(m).topLeftCorner(k, k), m.labels());
}

std::vector<Eigen::MatrixXd> autocovariances(const MvarModel& m, std::size_t max_lag) {
    const auto k = static_cast<Eigen::Index>(m.variables());
    const std::size_t p = m.order();
    const Eigen::MatrixXd big = companion_stationary(m);
    std::vector<Eigen::MatrixXd> gammas;
    gammas.reserve(max_lag + 1);
    for (std::size_t j = 0; j <= max_lag; ++j) {
        if (j < p) {
            gammas.push_back(big.block(0, static_cast<Eigen::Index>(j) * k, k, k));
        } else {
            Eigen::MatrixXd g = Eigen::MatrixXd::Zero(k, k);
            for (std::size_t i = 1; i <= p; ++i) g.noalias() += m.coefficients()[i - 1] * gammas[j - i];
            gammas.push_back(std::move(g));
        }
    }
    gammas[0] = 0.5 * (gammas[0] + gammas[0].transpose());
    return gammas;
}

Eigen::MatrixXd lag_covariance(const MvarModel& m, const CovarianceMatrix& sigma, std::size_t k) {
    if (m.order() == 1) {
        Eigen::MatrixXd g = sigma.matrix();
        for (std::size_t i = 0; i < k; ++i) g = m.coefficients()[0] * g;
        return g;
    }
    return autocovariances(m, k)[k];
}

HistoryCovariance::HistoryCovariance(CovarianceMatrix joint, std::size_t variables, std::size_t lag_count)
    : joint_(std::move(joint)), variables_(variables), lag_count_(lag_count) {
    if (joint_.dim() != variables_ * (lag_count_ + 1)) {
        throw Error(ErrorCode::kInvalidArgument, "history covariance dimension does not match k * (lags + 1)");
    }
}

std::size_t HistoryCovariance::position(std::size_t variable, std::size_t lag) const {
    if (variable >= variables_ || lag > lag_count_) {
        throw Error(ErrorCode::kInvalidBlock, "variable or lag out of range for this history");
    }
    return lag * variables_ + variable;
}

BlockIndex HistoryCovariance::block(std::size_t variable, std::size_t lag) const {
    return BlockIndex{position(variable, lag)};
}

BlockIndex HistoryCovariance::history(std::size_t variable, std::size_t first_lag, std::size_t last_lag) const {
    std::vector<std::size_t> idx;
    for (std::size_t l = first_lag; l <= last_lag; ++l) idx.push_back(position(variable, l));
    return BlockIndex(std::move(idx));
}

BlockIndex HistoryCovariance::pasts(const std::vector<std::size_t>& variables, std::size_t lags) const {
    std::vector<std::size_t> idx;
    for (auto v : variables) {
        for (std::size_t l = 1; l <= lags; ++l) idx.push_back(position(v, l));
    }
    return BlockIndex(std::move(idx));
}

HistoryCovariance history_covariance(const MvarModel& m, std::size_t lags) {
    if (lags == 0) throw Error(ErrorCode::kInvalidArgument, "history needs at least one lag");
    const std::size_t k = m.variables();
    const std::size_t dim = k * (lags + 1);
    if (dim > kMaxHistoryDimension) {
        throw Error(ErrorCode::kDimensionCap, "history covariance of dimension " + std::to_string(dim) +
                                                  " exceeds the cap; use fewer lags or a looser tolerance");
    }
    const auto gammas = autocovariances(m, lags);
    Eigen::MatrixXd joint(dim, dim);
    for (std::size_t l1 = 0; l1 <= lags; ++l1) {
        for (std::size_t v1 = 0; v1 < k; ++v1) {
            for (std::size_t l2 = 0; l2 <= lags; ++l2) {
                for (std::size_t v2 = 0; v2 < k; ++v2) {
                    joint(static_cast<Eigen::Index>(l1 * k + v1), static_cast<Eigen::Index>(l2 * k + v2)) =
                        cov_entry(gammas, v1, l1, v2, l2);
                }
            }
        }
    }
    std::vector<std::string> labels;
    for (std::size_t l = 0; l <= lags; ++l) {
        for (const auto& name : m.labels()) labels.push_back(name + (l == 0 ? "[t]" : "[t-" + std::to_string(l) + "]"));
    }
    try {
        return HistoryCovariance(CovarianceMatrix(joint, std::move(labels)), k, lags);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::kNotPositiveDefinite || e.code() == ErrorCode::kIllConditioned) {
            throw Error(ErrorCode::kSingularHistory, e.what());
        }
        throw;
    }
}

Eigen::MatrixXd selected_history_covariance(const std::vector<Eigen::MatrixXd>& gammas, std::size_t target,
                                            const std::vector<PastBlock>& blocks) {
    std::vector<std::pair<std::size_t, std::size_t>> entries{{target, 0}};
    for (const auto& b : blocks) {
        for (std::size_t l = 1; l <= b.lags; ++l) entries.emplace_back(b.variable, l);
    }
    const auto n = static_cast<Eigen::Index>(entries.size());
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto [v1, l1] = entries[static_cast<std::size_t>(i)];
            const auto [v2, l2] = entries[static_cast<std::size_t>(j)];
            out(i, j) = cov_entry(gammas, v1, l1, v2, l2);
        }
    }
    return out;
}

std::vector<ConditionalVariance> converge_conditional_variances(
    const MvarModel& m, std::size_t target, const std::vector<std::vector<std::size_t>>& conditioning_sets,
    double tol) {
    if (target >= m.variables()) throw Error(ErrorCode::kInvalidArgument, "target variable out of range");
    if (!(tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
    std::size_t widest = 0;
    for (const auto& set : conditioning_sets) {
        for (auto v : set) {
            if (v >= m.variables()) throw Error(ErrorCode::kInvalidArgument, "conditioning variable out of range");
        }
        widest = std::max(widest, set.size());
    }

    const CovarianceMatrix sigma = stationary_covariance(m);
    const double stationary_var = sigma(target, target);
    std::vector<ConditionalVariance> out(conditioning_sets.size(), {stationary_var, 0});
    if (widest == 0) return out;

    auto at_lags = [&](const std::vector<Eigen::MatrixXd>& gammas, const std::vector<std::size_t>& set,
                       std::size_t lags) {
        std::vector<PastBlock> blocks;
        for (auto v : set) blocks.push_back({v, lags});
        const Eigen::MatrixXd cov = selected_history_covariance(gammas, target, blocks);
        std::vector<std::size_t> given(static_cast<std::size_t>(cov.rows()) - 1);
        for (std::size_t i = 0; i < given.size(); ++i) given[i] = i + 1;
        try {
            return linalg::conditional_variance(cov, 0, given);
        } catch (const Error& e) {
            throw Error(ErrorCode::kSingularHistory, e.what());
        }
    };

    std::vector<double> previous(conditioning_sets.size(), 0.0);
    for (std::size_t lags = 1;; lags *= 2) {
        if (lags > kMaxTruncationLags) {
            throw Error(ErrorCode::kNotConverged,
                        "infinite-past conditioning did not reach the tolerance within " +
                            std::to_string(kMaxTruncationLags) + " lags");
        }
        if (1 + widest * lags > kMaxHistoryDimension) {
            throw Error(ErrorCode::kDimensionCap,
                        "truncated history would exceed the dimension cap; loosen the tolerance");
        }
        const auto gammas = autocovariances(m, lags);
        bool settled = lags > 1;
        for (std::size_t s = 0; s < conditioning_sets.size(); ++s) {
            if (conditioning_sets[s].empty()) continue;
            const double v = at_lags(gammas, conditioning_sets[s], lags);
            if (lags > 1 && std::abs(v - previous[s]) > tol * std::abs(previous[s])) settled = false;
            previous[s] = v;
        }
        if (settled) {
            for (std::size_t s = 0; s < conditioning_sets.size(); ++s) {
                if (!conditioning_sets[s].empty()) out[s] = {previous[s], lags};
            }
            return out;
        }
    }
}

ConditionalVariance infinite_past_conditional_variance(const MvarModel& m, std::size_t target,
                                                       const std::vector<std::size_t>& conditioning, double tol) {
    return converge_conditional_variances(m, target, {conditioning}, tol).front();
}

Eigen::MatrixXd simulate(const MvarModel& m, std::size_t steps, std::uint64_t seed, std::size_t burn_in) {
    if (steps == 0) throw Error(ErrorCode::kInvalidArgument, "steps must be at least 1");
    if (!(m.spectral_radius() < 1.0 - MvarModel::kStabilityMargin)) {
        throw Error(ErrorCode::kUnstableModel, "cannot simulate an unstable model");
    }
    const auto k = static_cast<Eigen::Index>(m.variables());
    const std::size_t p = m.order();
    const Eigen::MatrixXd chol = m.noise_cov().cholesky().matrixL();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    // Ring buffer of the last p states; history[(t − j) mod p] = x_{t−j}.
    std::vector<Eigen::VectorXd> history(p, Eigen::VectorXd::Zero(k));
    Eigen::MatrixXd out(static_cast<Eigen::Index>(steps), k);
    Eigen::VectorXd z(k);
    Eigen::VectorXd x(k);
    const std::size_t total = burn_in + steps;
    for (std::size_t t = 0; t < total; ++t) {
        for (Eigen::Index i = 0; i < k; ++i) z(i) = gauss(rng);
        x.noalias() = chol * z;
        for (std::size_t j = 1; j <= p; ++j) x.noalias() += m.coefficients()[j - 1] * history[(t + p - j) % p];
        history[t % p] = x;
        if (t >= burn_in) out.row(static_cast<Eigen::Index>(t - burn_in)) = x.transpose();
    }
    return out;
}

}  // namespace gausspid
