#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <gausspid/covariance.hpp>
#include <gausspid/mvar.hpp>
#include <gausspid/pid.hpp>
#include <random>
#include <vector>

namespace gausspid::testing {

using Rng = std::mt19937_64;

inline Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = g(rng);
    return m;
}

/// Random SPD matrix with moderate conditioning and unequal variances.
inline Eigen::MatrixXd random_spd(Eigen::Index dim, Rng& rng) {
    std::uniform_real_distribution<double> scale(0.3, 3.0);
    const Eigen::MatrixXd g = gaussian_matrix(dim, dim + 2, rng);
    Eigen::MatrixXd s = g * g.transpose() / static_cast<double>(dim + 2);
    s.diagonal().array() += 0.05;
    const Eigen::VectorXd d = Eigen::VectorXd::NullaryExpr(dim, [&] { return scale(rng); });
    return d.asDiagonal() * s * d.asDiagonal();
}

inline TripletSpec random_triplet_spec(Rng& rng) {
    std::uniform_real_distribution<double> u(-0.95, 0.95);
    while (true) {
        const TripletSpec s{u(rng), u(rng), u(rng)};
        if (s.determinant() > 1e-3) return s;
    }
}

/// Stable model with companion spectral radius drawn from [0.1, 0.9].
inline MvarModel random_stable_model(std::size_t k, std::size_t p, Rng& rng) {
    std::uniform_real_distribution<double> radius(0.1, 0.9);
    std::vector<Eigen::MatrixXd> a;
    for (std::size_t j = 0; j < p; ++j) {
        a.push_back(gaussian_matrix(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k), rng) /
                    std::sqrt(static_cast<double>(k)));
    }
    const double r = companion_spectral_radius(a);
    // Scaling A_j by s^j scales every companion eigenvalue by s.
    const double s = radius(rng) / std::max(r, 1e-12);
    double sj = 1.0;
    for (auto& m : a) {
        sj *= s;
        m *= sj;
    }
    return MvarModel(std::move(a), CovarianceMatrix(random_spd(static_cast<Eigen::Index>(k), rng)));
}

inline MvarModel example1(double alpha) {
    Eigen::MatrixXd a(2, 2);
    a << alpha, alpha, 0, 0;
    return MvarModel({a}, CovarianceMatrix(Eigen::MatrixXd::Identity(2, 2)), {"X", "Y"});
}

inline MvarModel example2(double alpha, double beta) {
    Eigen::MatrixXd a(2, 2);
    a << 0, alpha, beta, 0;
    return MvarModel({a}, CovarianceMatrix(Eigen::MatrixXd::Identity(2, 2)), {"X", "Y"});
}

inline double example3_delta(double alpha, double gamma, double rho) {
    return std::sqrt(1 + alpha * alpha + 2 * alpha * gamma * rho + gamma * gamma);
}

/// X_t = (α Y_{t−1} + γ Z_{t−1} + ε^X_t)/Δ, Y_t = ε^Y_t, Z_t = ε^Z_t, corr(ε^Y, ε^Z) = ρ.
inline MvarModel example3(double alpha, double gamma, double rho) {
    const double d = example3_delta(alpha, gamma, rho);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
    a(0, 1) = alpha / d;
    a(0, 2) = gamma / d;
    Eigen::MatrixXd noise = Eigen::MatrixXd::Identity(3, 3);
    noise(0, 0) = 1.0 / (d * d);
    noise(1, 2) = noise(2, 1) = rho;
    return MvarModel({a}, CovarianceMatrix(noise), {"X", "Y", "Z"});
}

/// Rows drawn from N(0, cov).
inline Eigen::MatrixXd sample_gaussian(const Eigen::MatrixXd& cov, Eigen::Index n, Rng& rng) {
    const Eigen::MatrixXd l = cov.llt().matrixL();
    return gaussian_matrix(n, cov.rows(), rng) * l.transpose();
}

inline Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& x) {
    const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
    return c.transpose() * c / static_cast<double>(x.rows() - 1);
}

/// Residual variance of column y regressed on the given columns (with
/// intercept), by solving the normal equations directly.
inline double ols_residual_variance(const Eigen::MatrixXd& data, Eigen::Index y, const std::vector<Eigen::Index>& xs) {
    const Eigen::Index n = data.rows();
    Eigen::MatrixXd design(n, static_cast<Eigen::Index>(xs.size()) + 1);
    design.col(0).setOnes();
    for (std::size_t j = 0; j < xs.size(); ++j) design.col(static_cast<Eigen::Index>(j) + 1) = data.col(xs[j]);
    const Eigen::VectorXd beta = (design.transpose() * design).ldlt().solve(design.transpose() * data.col(y));
    const Eigen::VectorXd r = data.col(y) - design * beta;
    return r.squaredNorm() / static_cast<double>(n - design.cols());
}

/// Mean and standard error of the mean.
struct MeanSe {
    double mean = 0.0;
    double sd = 0.0;
    double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    return {m, sd, sd / std::sqrt(static_cast<double>(v.size()))};
}

}  // namespace gausspid::testing
