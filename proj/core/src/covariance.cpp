#include "gausspid/covariance.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "gausspid/errors.hpp"

namespace gausspid {

BlockIndex::BlockIndex(std::initializer_list<std::size_t> indices) : BlockIndex(std::vector<std::size_t>(indices)) {}

BlockIndex::BlockIndex(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    std::unordered_set<std::size_t> seen;
    for (auto i : indices_) {
        if (!seen.insert(i).second) {
            throw Error(ErrorCode::kInvalidBlock, "duplicate index " + std::to_string(i) + " in block");
        }
    }
}

BlockIndex BlockIndex::range(std::size_t first, std::size_t count) {
    std::vector<std::size_t> idx(count);
    for (std::size_t i = 0; i < count; ++i) idx[i] = first + i;
    return BlockIndex(std::move(idx));
}

bool BlockIndex::overlaps(const BlockIndex& other) const noexcept {
    for (auto i : indices_) {
        if (std::find(other.indices_.begin(), other.indices_.end(), i) != other.indices_.end()) return true;
    }
    return false;
}

BlockIndex BlockIndex::united(const BlockIndex& other) const {
    if (overlaps(other)) throw Error(ErrorCode::kOverlappingBlocks, "blocks share an index");
    std::vector<std::size_t> joined = indices_;
    joined.insert(joined.end(), other.indices_.begin(), other.indices_.end());
    return BlockIndex(std::move(joined));
}

void BlockIndex::validate(std::size_t dim) const {
    if (indices_.empty()) throw Error(ErrorCode::kInvalidBlock, "block is empty");
    for (auto i : indices_) {
        if (i >= dim) {
            throw Error(ErrorCode::kInvalidBlock,
                        "index " + std::to_string(i) + " out of range for dimension " + std::to_string(dim));
        }
    }
}

namespace {

// Above this size the full eigendecomposition is replaced by the Cholesky
// pivots plus a 1-norm condition estimate.
constexpr Eigen::Index kExactSpectrumLimit = 512;

}  // namespace

CovarianceMatrix::CovarianceMatrix(const Eigen::MatrixXd& data, std::vector<std::string> labels)
    : labels_(std::move(labels)) {
    if (data.rows() == 0 || data.rows() != data.cols()) {
        throw Error(ErrorCode::kInvalidArgument, "covariance must be a non-empty square matrix");
    }
    if (!data.allFinite()) throw Error(ErrorCode::kInvalidArgument, "covariance has non-finite entries");
    if (!labels_.empty() && labels_.size() != static_cast<std::size_t>(data.rows())) {
        throw Error(ErrorCode::kInvalidArgument, "label count does not match covariance dimension");
    }
    const double scale = data.cwiseAbs().maxCoeff();
    const double asym = (data - data.transpose()).cwiseAbs().maxCoeff();
    if (asym > kAsymmetryTolerance * scale) {
        std::ostringstream msg;
        msg << "matrix is not symmetric (max asymmetry " << asym << ")";
        throw Error(ErrorCode::kInvalidArgument, msg.str());
    }
    data_ = 0.5 * (data + data.transpose());

    const auto n = data_.rows();
    const double eps = std::numeric_limits<double>::epsilon();
    if (n <= kExactSpectrumLimit) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(data_, Eigen::EigenvaluesOnly);
        const double lo = eig.eigenvalues().minCoeff();
        const double hi = eig.eigenvalues().maxCoeff();
        if (!(hi > 0.0) || lo <= static_cast<double>(n) * eps * hi) {
            std::ostringstream msg;
            msg << "smallest eigenvalue " << lo << " is not positive relative to largest " << hi;
            throw Error(ErrorCode::kNotPositiveDefinite, msg.str());
        }
        condition_ = hi / lo;
    }
    llt_.compute(data_);
    if (llt_.info() != Eigen::Success) {
        throw Error(ErrorCode::kNotPositiveDefinite, "Cholesky factorization failed");
    }
    if (n > kExactSpectrumLimit) {
        const Eigen::VectorXd pivots = llt_.matrixL().toDenseMatrix().diagonal().array().square();
        if (pivots.minCoeff() <= static_cast<double>(n) * eps * data_.diagonal().maxCoeff()) {
            throw Error(ErrorCode::kNotPositiveDefinite, "Cholesky pivot vanishes");
        }
        condition_ = 1.0 / llt_.rcond();
    }
    if (condition_ > kMaxConditionNumber) {
        std::ostringstream msg;
        msg << "condition number " << condition_ << " exceeds " << kMaxConditionNumber;
        throw Error(ErrorCode::kIllConditioned, msg.str());
    }
}

std::optional<std::size_t> CovarianceMatrix::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == label) return i;
    }
    return std::nullopt;
}

double CovarianceMatrix::log_determinant() const {
    return 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
}

Eigen::MatrixXd CovarianceMatrix::block(const BlockIndex& rows, const BlockIndex& cols) const {
    rows.validate(dim());
    cols.validate(dim());
    Eigen::MatrixXd out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = (*this)(rows[i], cols[j]);
    }
    return out;
}

CovarianceMatrix CovarianceMatrix::submatrix(const BlockIndex& block_index) const {
    std::vector<std::string> sub_labels;
    if (!labels_.empty()) {
        for (auto i : block_index) sub_labels.push_back(labels_.at(i));
    }
    return CovarianceMatrix(block(block_index, block_index), std::move(sub_labels));
}

CovarianceMatrix CovarianceMatrix::standardized() const {
    const Eigen::VectorXd inv_sd = data_.diagonal().array().sqrt().inverse();
    return CovarianceMatrix(inv_sd.asDiagonal() * data_ * inv_sd.asDiagonal(), labels_);
}

}  // namespace gausspid
