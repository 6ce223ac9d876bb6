#include "gausspid/gaussian.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>

#include "gausspid/errors.hpp"

namespace gausspid {

namespace linalg {

Eigen::MatrixXd select(const Eigen::MatrixXd& m, Indices rows, Indices cols) {
    Eigen::MatrixXd out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                m(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[j]));
        }
    }
    return out;
}

double log_det_spd(const Eigen::MatrixXd& m) {
    if (m.size() == 0) return 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::kSingularBlock, "block is not positive definite");
    const Eigen::VectorXd diag = llt.matrixLLT().diagonal();
    if (diag.minCoeff() <= 0.0) throw Error(ErrorCode::kSingularBlock, "block is singular");
    return 2.0 * diag.array().log().sum();
}

Eigen::MatrixXd schur_complement(const Eigen::MatrixXd& joint, Indices x, Indices y) {
    Eigen::MatrixXd sxx = select(joint, x, x);
    if (y.empty()) return sxx;
    const Eigen::MatrixXd syy = select(joint, y, y);
    Eigen::LLT<Eigen::MatrixXd> llt(syy);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::kSingularBlock, "conditioning block fails Cholesky");
    }
    // W = L⁻¹ Σ(Y,X); Σ(X|Y) = Σ(X) − WᵀW.
    const Eigen::MatrixXd w = llt.matrixL().solve(select(joint, y, x));
    sxx.noalias() -= w.transpose() * w;
    return 0.5 * (sxx + sxx.transpose());
}

double conditional_variance(const Eigen::MatrixXd& joint, std::size_t target, Indices given) {
    const std::size_t t[] = {target};
    return schur_complement(joint, t, given)(0, 0);
}

double mutual_information_nats(const Eigen::MatrixXd& joint, Indices x, Indices y) {
    if (x.empty() || y.empty()) return 0.0;
    const Eigen::LLT<Eigen::MatrixXd> lx(select(joint, x, x));
    const Eigen::LLT<Eigen::MatrixXd> ly(select(joint, y, y));
    if (lx.info() != Eigen::Success || ly.info() != Eigen::Success) {
        throw Error(ErrorCode::kSingularBlock, "marginal block fails Cholesky");
    }
    // det Σ(X|Y) / det Σ(X) = Π (1 − σᵢ²) over the canonical correlations σᵢ,
    // the singular values of Lx⁻¹ Σ(X,Y) Ly⁻ᵀ. Summing log1p keeps small
    // informations accurate and the result symmetric in X and Y.
    const Eigen::MatrixXd left = lx.matrixL().solve(select(joint, x, y));
    const Eigen::MatrixXd whitened = ly.matrixL().solve(left.transpose()).transpose();
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(whitened);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        const double s = svd.singularValues()(i);
        if (!(s < 1.0)) throw Error(ErrorCode::kSingularBlock, "joint covariance is singular (unit canonical correlation)");
        sum += std::log1p(-s * s);
    }
    return -0.5 * sum;
}

}  // namespace linalg

namespace {

void check_pair(const CovarianceMatrix& joint, const BlockIndex& x, const BlockIndex& y) {
    x.validate(joint.dim());
    y.validate(joint.dim());
    if (x.overlaps(y)) throw Error(ErrorCode::kOverlappingBlocks, "x and y blocks overlap");
}

}  // namespace

CovarianceMatrix partial_covariance(const CovarianceMatrix& joint, const BlockIndex& x, const BlockIndex& y) {
    check_pair(joint, x, y);
    std::vector<std::string> labels;
    if (!joint.labels().empty()) {
        for (auto i : x) labels.push_back(joint.labels()[i]);
    }
    return CovarianceMatrix(linalg::schur_complement(joint.matrix(), x.indices(), y.indices()), std::move(labels));
}

InfoValue gaussian_entropy(const CovarianceMatrix& cov, InfoUnit unit) {
    const double m = static_cast<double>(cov.dim());
    const double nats = 0.5 * cov.log_determinant() + 0.5 * m * std::log(2.0 * std::numbers::pi * std::numbers::e);
    return InfoValue::from_nats(nats, unit);
}

InfoValue mutual_information(const CovarianceMatrix& joint, const BlockIndex& x, const BlockIndex& y, InfoUnit unit) {
    check_pair(joint, x, y);
    const double nats = linalg::mutual_information_nats(joint.matrix(), x.indices(), y.indices());
    return InfoValue::from_nats(clamp_information(nats, "mutual information"), unit);
}

InfoValue conditional_mutual_information(const CovarianceMatrix& joint, const BlockIndex& x, const BlockIndex& y,
                                         const BlockIndex& z, InfoUnit unit) {
    check_pair(joint, x, y);
    check_pair(joint, x, z);
    const BlockIndex yz = y.united(z);
    const double whole = linalg::mutual_information_nats(joint.matrix(), x.indices(), yz.indices());
    const double part = linalg::mutual_information_nats(joint.matrix(), x.indices(), z.indices());
    return InfoValue::from_nats(clamp_information(whole - part, "conditional mutual information"), unit);
}

}  // namespace gausspid
