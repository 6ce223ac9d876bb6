#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "gausspid/info.hpp"
#include "gausspid/pid.hpp"

namespace gausspid {

/// Source–target cross-covariances of a whitened triplet: the target has unit
/// variance and each source block has identity covariance, so
/// a = Σ(Y,X) and c = Σ(Z,X) fix the (X,Y) and (X,Z) marginals.
struct MarginalConstraints {
    Eigen::VectorXd a;
    Eigen::VectorXd c;

    [[nodiscard]] std::size_t n() const noexcept { return static_cast<std::size_t>(a.size()); }
    [[nodiscard]] std::size_t p() const noexcept { return static_cast<std::size_t>(c.size()); }
    /// Throws kInvalidArgument unless both blocks are non-empty with |a|, |c| < 1.
    void validate() const;

    /// Whitens a triplet with univariate target into constraint form.
    [[nodiscard]] static MarginalConstraints from_triplet(const GaussianTriplet& t);

    /// max{I(X;Y), I(X;Z)} in nats, the proven value of the union information.
    [[nodiscard]] double theorem_value_nats() const;
};

/// Joint covariance of (X̃, Ỹ, Z̃) with Σ(Z̃,Ỹ) = cross (p×n) and the marginal
/// blocks copied verbatim from `mc`.
[[nodiscard]] Eigen::MatrixXd assemble_union_covariance(const MarginalConstraints& mc, const Eigen::MatrixXd& cross);

/// I(X̃;Ỹ,Z̃) in nats for the assembled covariance; +inf when it is not
/// positive definite.
[[nodiscard]] double union_objective(const MarginalConstraints& mc, const Eigen::MatrixXd& cross);

/// B̃ = c aᵀ / (cᵀc), the rank-one cross-covariance with B̃ᵀc = a and spectral
/// norm |a|/|c|. Requires |a| ≤ |c|; swap the roles of the sources otherwise.
///
/// Throws kDegenerateConstraint when c = 0 but a ≠ 0, and kInvalidArgument when
/// |a| > |c|. Returns the zero matrix when both vanish.
[[nodiscard]] Eigen::MatrixXd construct_optimal_cross(const MarginalConstraints& mc);

struct OptimizerConfig {
    double tol = 1e-9;               ///< relative objective change counted as stalled
    std::size_t patience = 5;        ///< stalled iterations that end an inner solve
    std::size_t max_iterations = 10000;
    double barrier_start = 1e-2;
    double barrier_floor = 1e-8;
    double barrier_decay = 0.1;
    double fd_step = 1e-6;
    double fd_check_step = 1e-4;
    double start_noise = 0.05;        ///< uniform perturbation of the constructive start
    std::size_t random_restarts = 5;
    double restart_norm = 0.5;        ///< spectral norm bound of random starts
    std::uint64_t seed = 1;
    bool record_trace = false;
};

struct UnionIterate {
    double objective = 0.0;           ///< I(X̃;Ỹ,Z̃), nats, without barrier
    double min_eigenvalue = 0.0;      ///< of the assembled covariance
    bool marginals_intact = true;     ///< a and c blocks bit-identical to the input
};

struct UnionResult {
    InfoValue union_info;
    Eigen::MatrixXd optimal_cross;    ///< p×n
    InfoValue theorem_value;
    double gap = 0.0;                 ///< union_info − theorem_value, nats
    std::size_t iterations = 0;
    bool converged = false;
    std::size_t best_start = 0;       ///< 0 = perturbed constructive start, then random restarts
    double max_gradient_discrepancy = 0.0;
    std::vector<UnionIterate> trace;  ///< accepted iterates of all starts when record_trace
};

/// Minimizes I(X̃;Ỹ,Z̃) over Σ(Z̃,Ỹ) with the source–target marginals held
/// fixed, by BFGS on a log-barrier objective (barrier on the smallest
/// eigenvalue of the assembled covariance). Runs from a perturbed constructive
/// start plus random restarts and keeps the best. Never throws for
/// non-convergence; check `converged`.
[[nodiscard]] UnionResult minimize_union_information(const MarginalConstraints& mc, const OptimizerConfig& config = {},
                                                     InfoUnit unit = InfoUnit::kNats);

/// I(X;Y,Z) − union information, with the union information found numerically.
[[nodiscard]] InfoValue synergy_from_union(const GaussianTriplet& t, const OptimizerConfig& config = {},
                                           InfoUnit unit = InfoUnit::kNats);

struct MmiTrial {
    std::size_t n = 0;
    std::size_t p = 0;
    double theorem_value = 0.0;       ///< nats
    double optimizer_value = 0.0;     ///< nats
    double optimizer_gap = 0.0;
    double constructive_gap = 0.0;    ///< objective at construct_optimal_cross minus theorem
    bool converged = false;
    std::size_t iterations = 0;
};

/// Random whitened constraints with |a|, |c| drawn in [0.05, 0.95].
[[nodiscard]] MarginalConstraints random_constraints(std::size_t n, std::size_t p, std::uint64_t seed);

/// Verification harness: `trials` random instances of size (n, p), each run
/// through the optimizer and the constructive solution. Results are ordered
/// by trial index regardless of `threads`.
[[nodiscard]] std::vector<MmiTrial> verify_mmi(std::size_t n, std::size_t p, std::size_t trials, std::uint64_t seed,
                                               const OptimizerConfig& config = {}, unsigned threads = 1);

}  // namespace gausspid
