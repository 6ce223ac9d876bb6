#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gausspid/mvar.hpp"

namespace gausspid {

/// T×k time series, one column per variable.
struct Dataset {
    Eigen::MatrixXd samples;
    std::vector<std::string> labels;
    bool demeaned = false;

    [[nodiscard]] std::size_t steps() const noexcept { return static_cast<std::size_t>(samples.rows()); }
    [[nodiscard]] std::size_t variables() const noexcept { return static_cast<std::size_t>(samples.cols()); }

    /// Column-centred copy.
    [[nodiscard]] Dataset centered() const;
    /// Throws kTooFewSamples unless T > k(lags + 1) + 10.
    void require_samples(std::size_t lags) const;
};

/// Header row of labels, then one row per time step. Blank trailing lines are
/// ignored; empty, non-numeric or non-finite cells and ragged rows throw kParseError.
[[nodiscard]] Dataset parse_csv(std::istream& in);
[[nodiscard]] Dataset read_csv(const std::filesystem::path& path);
void write_csv(std::ostream& out, const Eigen::MatrixXd& samples, const std::vector<std::string>& labels);

struct EstimatedHistory {
    HistoryCovariance history;
    std::size_t usable_rows = 0;
    /// Ridge added to the diagonal, as a multiple of trace/dim. Zero when the
    /// raw sample covariance was usable.
    double loading = 0.0;
};

/// Sample covariance (1/(T'−1)) of the lagged embedding (x_t, x_{t−1}, …, x_{t−L}),
/// laid out like history_covariance. Exactly collinear data (constant or
/// duplicated columns) throws kNotPositiveDefinite. Merely ill-conditioned
/// estimates get diagonal loading from 1e-10 up to 1e-6 × trace/dim.
[[nodiscard]] EstimatedHistory estimate_covariance(const Dataset& d, std::size_t lags);

struct FitResult {
    std::vector<Eigen::MatrixXd> coefficients;
    Eigen::MatrixXd noise_cov;
    Eigen::VectorXd intercept;
    std::vector<std::string> labels;
    std::size_t usable_rows = 0;
    double spectral_radius = 0.0;
    bool stable = false;

    /// Throws kUnstableModel when !stable, or a covariance error when the
    /// residual covariance is degenerate.
    [[nodiscard]] MvarModel model() const;
};

/// Least squares of x_t on (1, x_{t−1}, …, x_{t−p}). Residual covariance uses
/// the divisor T' − kp − 1.
[[nodiscard]] FitResult fit_mvar(const Dataset& d, std::size_t order);

}  // namespace gausspid
