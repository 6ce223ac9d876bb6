#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <span>

#include "gausspid/covariance.hpp"
#include "gausspid/info.hpp"

namespace gausspid {

/// Σ(X|Y) = Σ(X) − Σ(X,Y) Σ(Y)⁻¹ Σ(Y,X), solved through the Cholesky factor
/// of Σ(Y).
///
/// Throws kOverlappingBlocks if x and y share an index, kSingularBlock if
/// Σ(Y) is not factorizable.
[[nodiscard]] CovarianceMatrix partial_covariance(const CovarianceMatrix& joint, const BlockIndex& x,
                                                  const BlockIndex& y);

/// ½ log det Σ + (m/2) log 2πe.
[[nodiscard]] InfoValue gaussian_entropy(const CovarianceMatrix& cov, InfoUnit unit = InfoUnit::kNats);

/// ½ log[det Σ(X) / det Σ(X|Y)].
[[nodiscard]] InfoValue mutual_information(const CovarianceMatrix& joint, const BlockIndex& x, const BlockIndex& y,
                                           InfoUnit unit = InfoUnit::kNats);

/// I(X;Y|Z) = I(X;Y,Z) − I(X;Z), clamped at zero.
[[nodiscard]] InfoValue conditional_mutual_information(const CovarianceMatrix& joint, const BlockIndex& x,
                                                       const BlockIndex& y, const BlockIndex& z,
                                                       InfoUnit unit = InfoUnit::kNats);

/// Unchecked dense kernels shared by the higher-level modules. Indices are
/// trusted; factorization failures throw kSingularBlock.
namespace linalg {

using Indices = std::span<const std::size_t>;

[[nodiscard]] Eigen::MatrixXd select(const Eigen::MatrixXd& m, Indices rows, Indices cols);

/// log det of a symmetric positive-definite matrix via Cholesky. An empty
/// matrix has log det 0.
[[nodiscard]] double log_det_spd(const Eigen::MatrixXd& m);

/// Schur complement of the y block; y may be empty.
[[nodiscard]] Eigen::MatrixXd schur_complement(const Eigen::MatrixXd& joint, Indices x, Indices y);

/// Scalar Σ(target | given); given may be empty.
[[nodiscard]] double conditional_variance(const Eigen::MatrixXd& joint, std::size_t target, Indices given);

/// Raw (unclamped) I(X;Y) in nats.
[[nodiscard]] double mutual_information_nats(const Eigen::MatrixXd& joint, Indices x, Indices y);

}  // namespace linalg

}  // namespace gausspid
