#pragma once

#include <Eigen/Core>
#include <Eigen/Cholesky>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gausspid {

/// Ordered list of distinct zero-based indices naming the rows/columns of a
/// variable block inside a joint covariance.
class BlockIndex {
public:
    BlockIndex() = default;
    BlockIndex(std::initializer_list<std::size_t> indices);
    explicit BlockIndex(std::vector<std::size_t> indices);

    /// Contiguous block [first, first + count).
    [[nodiscard]] static BlockIndex range(std::size_t first, std::size_t count);

    [[nodiscard]] const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
    [[nodiscard]] bool empty() const noexcept { return indices_.empty(); }
    [[nodiscard]] std::size_t operator[](std::size_t i) const { return indices_[i]; }
    [[nodiscard]] auto begin() const noexcept { return indices_.begin(); }
    [[nodiscard]] auto end() const noexcept { return indices_.end(); }

    [[nodiscard]] bool overlaps(const BlockIndex& other) const noexcept;
    /// Concatenation; throws kOverlappingBlocks if the blocks share an index.
    [[nodiscard]] BlockIndex united(const BlockIndex& other) const;

    /// Throws kInvalidBlock unless non-empty with all indices < dim.
    void validate(std::size_t dim) const;

    friend bool operator==(const BlockIndex&, const BlockIndex&) = default;

private:
    std::vector<std::size_t> indices_;
};

/// Symmetric positive-definite covariance with optional variable labels.
///
/// The input is symmetrized on construction. Construction fails with
/// kNotPositiveDefinite when the smallest eigenvalue is not above
/// dim * eps * largest, and with kIllConditioned when the condition number
/// exceeds kMaxConditionNumber. Immutable afterwards; the Cholesky factor is
/// cached.
class CovarianceMatrix {
public:
    static constexpr double kMaxConditionNumber = 1e12;
    /// Asymmetry beyond this (relative to the largest entry) is a caller bug,
    /// not round-off, and is rejected instead of symmetrized.
    static constexpr double kAsymmetryTolerance = 1e-8;

    explicit CovarianceMatrix(const Eigen::MatrixXd& data, std::vector<std::string> labels = {});

    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.rows()); }
    [[nodiscard]] const Eigen::MatrixXd& matrix() const noexcept { return data_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const {
        return data_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
    [[nodiscard]] std::optional<std::size_t> index_of(std::string_view label) const;

    [[nodiscard]] const Eigen::LLT<Eigen::MatrixXd>& cholesky() const noexcept { return llt_; }
    [[nodiscard]] double log_determinant() const;
    /// Ratio of extreme eigenvalues (estimated for large matrices).
    [[nodiscard]] double condition_number() const noexcept { return condition_; }

    /// Σ(rows, cols) as a dense matrix.
    [[nodiscard]] Eigen::MatrixXd block(const BlockIndex& rows, const BlockIndex& cols) const;
    [[nodiscard]] CovarianceMatrix submatrix(const BlockIndex& block) const;
    /// Correlation form: unit diagonal, labels kept.
    [[nodiscard]] CovarianceMatrix standardized() const;

private:
    Eigen::MatrixXd data_;
    std::vector<std::string> labels_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double condition_ = 1.0;
};

}  // namespace gausspid
