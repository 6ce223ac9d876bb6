#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gausspid/covariance.hpp"

namespace gausspid {

/// Mean-zero vector autoregression x_t = Σ_j A_j x_{t−j} + ε_t with
/// Gaussian innovations ε ~ N(0, Σε).
class MvarModel {
public:
    /// Stability margin: the companion spectral radius must stay below 1 − this.
    static constexpr double kStabilityMargin = 1e-9;

    /// Throws kInvalidArgument on shape mismatches and kUnstableModel when the
    /// companion spectral radius is not below 1 − kStabilityMargin.
    MvarModel(std::vector<Eigen::MatrixXd> coefficients, CovarianceMatrix noise_cov, std::vector<std::string> labels = {});

    [[nodiscard]] std::size_t order() const noexcept { return coefficients_.size(); }
    [[nodiscard]] std::size_t variables() const noexcept { return static_cast<std::size_t>(noise_cov_.dim()); }
    [[nodiscard]] const std::vector<Eigen::MatrixXd>& coefficients() const noexcept { return coefficients_; }
    [[nodiscard]] const CovarianceMatrix& noise_cov() const noexcept { return noise_cov_; }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
    [[nodiscard]] double spectral_radius() const noexcept { return spectral_radius_; }

    /// Resolves a variable by label, or by decimal index when no label matches.
    [[nodiscard]] std::size_t variable(std::string_view name) const;

    /// kp×kp companion matrix of the stacked state (x_t, …, x_{t−p+1}).
    [[nodiscard]] Eigen::MatrixXd companion() const;

    /// Same dynamics with variables reordered: new variable i is old perm[i].
    [[nodiscard]] MvarModel permuted(const std::vector<std::size_t>& perm) const;

private:
    std::vector<Eigen::MatrixXd> coefficients_;
    CovarianceMatrix noise_cov_;
    std::vector<std::string> labels_;
    double spectral_radius_ = 0.0;
};

/// Spectral radius of the companion form of arbitrary coefficients.
[[nodiscard]] double companion_spectral_radius(const std::vector<Eigen::MatrixXd>& coefficients);

/// Solves X = A X Aᵀ + Q for a stable A. Uses the Kronecker identity
/// (I − A⊗A) vec X = vec Q for small systems and a doubling iteration above that.
[[nodiscard]] Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q);

/// Stationary covariance Σ of x_t. Order-p models go through the companion
/// form. Throws kUnstableModel for unstable models.
[[nodiscard]] CovarianceMatrix stationary_covariance(const MvarModel& m);

/// Γ_k = E[x_t x_{t−k}ᵀ]. `sigma` must be the stationary covariance of m; for
/// order > 1 the lags below the order come from the companion solution.
[[nodiscard]] Eigen::MatrixXd lag_covariance(const MvarModel& m, const CovarianceMatrix& sigma, std::size_t k);

/// Γ_0 … Γ_max_lag.
[[nodiscard]] std::vector<Eigen::MatrixXd> autocovariances(const MvarModel& m, std::size_t max_lag);

/// Largest assembled history covariance the library will build.
inline constexpr std::size_t kMaxHistoryDimension = 5000;

/// Joint covariance of (x_t, x_{t−1}, …, x_{t−L}). Position of variable v at
/// lag ℓ is ℓ·k + v.
class HistoryCovariance {
public:
    HistoryCovariance(CovarianceMatrix joint, std::size_t variables, std::size_t lag_count);

    [[nodiscard]] const CovarianceMatrix& joint() const noexcept { return joint_; }
    [[nodiscard]] std::size_t lag_count() const noexcept { return lag_count_; }
    [[nodiscard]] std::size_t variables() const noexcept { return variables_; }

    [[nodiscard]] std::size_t position(std::size_t variable, std::size_t lag) const;
    /// Single entry: variable at lag.
    [[nodiscard]] BlockIndex block(std::size_t variable, std::size_t lag) const;
    /// variable at lags first..last inclusive.
    [[nodiscard]] BlockIndex history(std::size_t variable, std::size_t first_lag, std::size_t last_lag) const;
    /// Union of histories (lags 1..lags) of several variables.
    [[nodiscard]] BlockIndex pasts(const std::vector<std::size_t>& variables, std::size_t lags) const;

private:
    CovarianceMatrix joint_;
    std::size_t variables_;
    std::size_t lag_count_;
};

/// Block-Toeplitz covariance of the present and `lags` past states. Throws
/// kDimensionCap above kMaxHistoryDimension and kSingularHistory when the
/// assembled matrix is not a valid covariance.
[[nodiscard]] HistoryCovariance history_covariance(const MvarModel& m, std::size_t lags);

/// One conditioning history: `variable` at lags 1..lags.
struct PastBlock {
    std::size_t variable = 0;
    std::size_t lags = 0;
};

/// Covariance over (target_t, the listed past blocks) built straight from the
/// autocovariances, without assembling the full history. gammas must cover
/// the largest lag used.
[[nodiscard]] Eigen::MatrixXd selected_history_covariance(const std::vector<Eigen::MatrixXd>& gammas,
                                                          std::size_t target, const std::vector<PastBlock>& blocks);

struct ConditionalVariance {
    double variance = 0.0;
    std::size_t lags_used = 0;
};

/// Largest truncation the lag-doubling search will try.
inline constexpr std::size_t kMaxTruncationLags = 4096;

/// Σ(target_t | full pasts of each set), for several conditioning sets at a
/// common truncation L = 1, 2, 4, … until every value changes by less than
/// tol (relative) between successive L. Empty sets return the stationary
/// variance. Throws kNotConverged at the lag cap and kDimensionCap if the
/// selected matrix would exceed kMaxHistoryDimension.
[[nodiscard]] std::vector<ConditionalVariance> converge_conditional_variances(
    const MvarModel& m, std::size_t target, const std::vector<std::vector<std::size_t>>& conditioning_sets,
    double tol = 1e-10);

/// Single-set form of converge_conditional_variances.
[[nodiscard]] ConditionalVariance infinite_past_conditional_variance(const MvarModel& m, std::size_t target,
                                                                     const std::vector<std::size_t>& conditioning,
                                                                     double tol = 1e-10);

/// steps × k sample path after discarding burn_in steps; deterministic for a
/// given seed. Throws kUnstableModel for unstable models.
[[nodiscard]] Eigen::MatrixXd simulate(const MvarModel& m, std::size_t steps, std::uint64_t seed,
                                       std::size_t burn_in = 1000);

}  // namespace gausspid
