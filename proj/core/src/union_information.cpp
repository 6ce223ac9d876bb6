#include "gausspid/union_information.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gausspid/errors.hpp"
#include "gausspid/gaussian.hpp"
#include "gausspid/parallel.hpp"

namespace gausspid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double mi_from_norm(double norm) { return -0.5 * std::log1p(-norm * norm); }

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 step so neighbouring trial indices get unrelated streams.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Constructive optimum without the |a| ≤ |c| precondition; the formula is
// symmetric under swapping the sources up to the normalizer.
Eigen::MatrixXd constructive_cross(const MarginalConstraints& mc) {
    const double denom = std::max(mc.a.squaredNorm(), mc.c.squaredNorm());
    if (denom == 0.0) return Eigen::MatrixXd::Zero(mc.c.size(), mc.a.size());
    return mc.c * mc.a.transpose() / denom;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

Eigen::MatrixXd as_cross(const Eigen::VectorXd& theta, Eigen::Index p, Eigen::Index n) {
    return Eigen::Map<const Eigen::MatrixXd>(theta.data(), p, n);
}

Eigen::VectorXd as_theta(const Eigen::MatrixXd& cross) {
    return Eigen::Map<const Eigen::VectorXd>(cross.data(), cross.size());
}

struct BarrierProblem {
    const MarginalConstraints& mc;
    double mu;

    double operator()(const Eigen::VectorXd& theta) const {
        const Eigen::MatrixXd cross = as_cross(theta, mc.c.size(), mc.a.size());
        const Eigen::MatrixXd sigma = assemble_union_covariance(mc, cross);
        const double lo = min_eigenvalue(sigma);
        if (!(lo > 0.0)) return kInf;
        const double f = union_objective(mc, cross);
        if (!std::isfinite(f)) return kInf;
        return f - mu * std::log(lo);
    }
};

Eigen::VectorXd fd_gradient(const BarrierProblem& phi, const Eigen::VectorXd& theta, double f0, double h) {
    Eigen::VectorXd g(theta.size());
    Eigen::VectorXd probe = theta;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        probe(i) = theta(i) + h;
        const double up = phi(probe);
        probe(i) = theta(i) - h;
        const double down = phi(probe);
        probe(i) = theta(i);
        if (std::isfinite(up) && std::isfinite(down)) {
            g(i) = (up - down) / (2.0 * h);
        } else if (std::isfinite(up)) {
            g(i) = (up - f0) / h;
        } else if (std::isfinite(down)) {
            g(i) = (f0 - down) / h;
        } else {
            g(i) = 0.0;
        }
    }
    return g;
}

// Pull an infeasible start back toward a feasible anchor along the segment;
// the feasible set of cross blocks is convex.
Eigen::MatrixXd make_feasible(const MarginalConstraints& mc, const Eigen::MatrixXd& start,
                              const Eigen::MatrixXd& anchor) {
    Eigen::MatrixXd b = start;
    for (int k = 0; k < 60; ++k) {
        if (min_eigenvalue(assemble_union_covariance(mc, b)) > 1e-6) return b;
        b = anchor + 0.5 * (b - anchor);
    }
    return anchor;
}

struct StartOutcome {
    Eigen::MatrixXd cross;
    double objective = kInf;
    std::size_t iterations = 0;
    bool converged = false;
    double max_discrepancy = 0.0;
};

StartOutcome run_start(const MarginalConstraints& mc, const Eigen::MatrixXd& start, const OptimizerConfig& cfg,
                       std::vector<UnionIterate>* trace) {
    const auto p = mc.c.size();
    const auto n = mc.a.size();
    Eigen::VectorXd theta = as_theta(start);
    const Eigen::Index d = theta.size();

    StartOutcome out;
    auto record = [&](const Eigen::VectorXd& th) {
        if (trace == nullptr) return;
        const Eigen::MatrixXd cross = as_cross(th, p, n);
        const Eigen::MatrixXd sigma = assemble_union_covariance(mc, cross);
        const bool intact = sigma.block(1, 0, n, 1) == mc.a && sigma.block(1 + n, 0, p, 1) == mc.c &&
                            sigma.block(0, 1, 1, n) == mc.a.transpose() &&
                            sigma.block(0, 1 + n, 1, p) == mc.c.transpose();
        trace->push_back({union_objective(mc, cross), min_eigenvalue(sigma), intact});
    };
    record(theta);

    bool inner_converged = false;
    for (double mu = cfg.barrier_start;; mu = std::max(mu * cfg.barrier_decay, cfg.barrier_floor)) {
        const BarrierProblem phi{mc, mu};
        double f = phi(theta);
        Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(d, d);
        Eigen::VectorXd g = fd_gradient(phi, theta, f, cfg.fd_step);
        std::size_t stalled = 0;
        inner_converged = false;

        while (out.iterations < cfg.max_iterations) {
            {
                const Eigen::VectorXd wide = fd_gradient(phi, theta, f, cfg.fd_check_step);
                const double disc = (wide - g).norm() / (1.0 + g.norm());
                out.max_discrepancy = std::max(out.max_discrepancy, disc);
                if (disc > 1e-3) g = wide;
            }
            if (g.norm() < 1e-14) {
                inner_converged = true;
                break;
            }
            Eigen::VectorXd dir = -inv_hessian * g;
            if (g.dot(dir) >= 0.0) {
                inv_hessian.setIdentity();
                dir = -g;
            }
            const double max_step = 0.5;
            if (dir.norm() > max_step) dir *= max_step / dir.norm();

            double t = 1.0;
            double f_new = kInf;
            Eigen::VectorXd trial;
            const double slope = g.dot(dir);
            for (int k = 0; k < 60; ++k) {
                trial = theta + t * dir;
                f_new = phi(trial);
                if (std::isfinite(f_new) && f_new <= f + 1e-4 * t * slope) break;
                t *= 0.5;
            }
            ++out.iterations;
            if (!std::isfinite(f_new) || f_new > f) {
                // No descent along the quasi-Newton direction: restart curvature once,
                // otherwise treat as stalled.
                if (!inv_hessian.isIdentity()) {
                    inv_hessian.setIdentity();
                    continue;
                }
                if (++stalled >= cfg.patience) {
                    inner_converged = true;
                    break;
                }
                continue;
            }

            const Eigen::VectorXd g_new = fd_gradient(phi, trial, f_new, cfg.fd_step);
            const Eigen::VectorXd s = trial - theta;
            const Eigen::VectorXd y = g_new - g;
            const double sy = s.dot(y);
            if (sy > 1e-16) {
                const double rho = 1.0 / sy;
                const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
                inv_hessian = (eye - rho * s * y.transpose()) * inv_hessian * (eye - rho * y * s.transpose()) +
                              rho * s * s.transpose();
            }
            const double rel = std::abs(f - f_new) / (std::abs(f) + 1e-12);
            theta = trial;
            f = f_new;
            g = g_new;
            record(theta);
            stalled = rel < cfg.tol ? stalled + 1 : 0;
            if (stalled >= cfg.patience) {
                inner_converged = true;
                break;
            }
        }
        if (!inner_converged || mu <= cfg.barrier_floor) break;
    }

    out.cross = as_cross(theta, p, n);
    out.objective = union_objective(mc, out.cross);
    out.converged = inner_converged && out.iterations < cfg.max_iterations;
    return out;
}

}  // namespace

void MarginalConstraints::validate() const {
    if (a.size() == 0 || c.size() == 0) throw Error(ErrorCode::kInvalidArgument, "source blocks must be non-empty");
    if (!a.allFinite() || !c.allFinite()) throw Error(ErrorCode::kInvalidArgument, "non-finite constraint");
    if (!(a.norm() < 1.0) || !(c.norm() < 1.0)) {
        throw Error(ErrorCode::kInvalidArgument, "|a| and |c| must be below 1 (positive conditional variances)");
    }
}

MarginalConstraints MarginalConstraints::from_triplet(const GaussianTriplet& t) {
    if (t.target().size() != 1) {
        throw Error(ErrorCode::kUnsupportedTarget, "union information is implemented for a univariate target only");
    }
    const auto& cov = t.joint();
    const double sd = std::sqrt(cov(t.target()[0], t.target()[0]));
    auto whiten = [&](const BlockIndex& src) -> Eigen::VectorXd {
        Eigen::LLT<Eigen::MatrixXd> llt(cov.block(src, src));
        if (llt.info() != Eigen::Success) throw Error(ErrorCode::kSingularBlock, "source block is singular");
        return llt.matrixL().solve(cov.block(src, t.target())) / sd;
    };
    MarginalConstraints mc{whiten(t.source1()), whiten(t.source2())};
    mc.validate();
    return mc;
}

double MarginalConstraints::theorem_value_nats() const {
    return std::max(mi_from_norm(a.norm()), mi_from_norm(c.norm()));
}

Eigen::MatrixXd assemble_union_covariance(const MarginalConstraints& mc, const Eigen::MatrixXd& cross) {
    const auto n = mc.a.size();
    const auto p = mc.c.size();
    if (cross.rows() != p || cross.cols() != n) {
        throw Error(ErrorCode::kInvalidArgument, "cross-covariance must be p x n");
    }
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(1 + n + p, 1 + n + p);
    s.block(1, 0, n, 1) = mc.a;
    s.block(0, 1, 1, n) = mc.a.transpose();
    s.block(1 + n, 0, p, 1) = mc.c;
    s.block(0, 1 + n, 1, p) = mc.c.transpose();
    s.block(1 + n, 1, p, n) = cross;
    s.block(1, 1 + n, n, p) = cross.transpose();
    return s;
}

double union_objective(const MarginalConstraints& mc, const Eigen::MatrixXd& cross) {
    const Eigen::MatrixXd sigma = assemble_union_covariance(mc, cross);
    const auto m = sigma.rows();
    Eigen::LLT<Eigen::MatrixXd> full(sigma);
    Eigen::LLT<Eigen::MatrixXd> sources(sigma.bottomRightCorner(m - 1, m - 1));
    if (full.info() != Eigen::Success || sources.info() != Eigen::Success) return kInf;
    const double logdet_full = 2.0 * full.matrixLLT().diagonal().array().log().sum();
    const double logdet_sources = 2.0 * sources.matrixLLT().diagonal().array().log().sum();
    if (!std::isfinite(logdet_full)) return kInf;
    // Σ(X̃) = 1, so I = ½ log[det Σ(Ỹ,Z̃) / det Σ̃].
    return 0.5 * (logdet_sources - logdet_full);
}

Eigen::MatrixXd construct_optimal_cross(const MarginalConstraints& mc) {
    mc.validate();
    const double aa = mc.a.squaredNorm();
    const double cc = mc.c.squaredNorm();
    if (cc == 0.0) {
        if (aa == 0.0) return Eigen::MatrixXd::Zero(mc.c.size(), mc.a.size());
        throw Error(ErrorCode::kDegenerateConstraint, "c = 0 while a != 0: no cross block satisfies B'c = a");
    }
    if (aa > cc) {
        throw Error(ErrorCode::kInvalidArgument, "construction requires |a| <= |c|; swap the sources");
    }
    return mc.c * mc.a.transpose() / cc;
}

UnionResult minimize_union_information(const MarginalConstraints& mc, const OptimizerConfig& config, InfoUnit unit) {
    mc.validate();
    const auto p = mc.c.size();
    const auto n = mc.a.size();
    const Eigen::MatrixXd anchor = constructive_cross(mc);

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> noise(-config.start_noise, config.start_noise);
    std::uniform_real_distribution<double> unit_interval(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<Eigen::MatrixXd> starts;
    {
        Eigen::MatrixXd perturbed = anchor;
        for (Eigen::Index i = 0; i < perturbed.size(); ++i) perturbed.data()[i] += noise(rng);
        starts.push_back(make_feasible(mc, perturbed, anchor));
    }
    for (std::size_t r = 0; r < config.random_restarts; ++r) {
        Eigen::MatrixXd m(p, n);
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = gauss(rng);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        const double norm = svd.singularValues()(0);
        const double target = config.restart_norm * unit_interval(rng);
        if (norm > 0.0) m *= target / norm;
        starts.push_back(make_feasible(mc, m, anchor));
    }

    UnionResult result;
    std::vector<UnionIterate>* trace = config.record_trace ? &result.trace : nullptr;
    StartOutcome best;
    for (std::size_t s = 0; s < starts.size(); ++s) {
        StartOutcome o = run_start(mc, starts[s], config, trace);
        result.max_gradient_discrepancy = std::max(result.max_gradient_discrepancy, o.max_discrepancy);
        if (o.objective < best.objective) {
            best = std::move(o);
            result.best_start = s;
        }
    }

    const double theorem = mc.theorem_value_nats();
    result.optimal_cross = best.cross;
    result.union_info = InfoValue::from_nats(best.objective, unit);
    result.theorem_value = InfoValue::from_nats(theorem, unit);
    result.gap = best.objective - theorem;
    result.iterations = best.iterations;
    result.converged = best.converged;
    return result;
}

InfoValue synergy_from_union(const GaussianTriplet& t, const OptimizerConfig& config, InfoUnit unit) {
    const MarginalConstraints mc = MarginalConstraints::from_triplet(t);
    const BlockIndex both = t.source1().united(t.source2());
    const double whole = linalg::mutual_information_nats(t.joint().matrix(), t.target().indices(), both.indices());
    const UnionResult u = minimize_union_information(mc, config, InfoUnit::kNats);
    return InfoValue::from_nats(clamp_information(whole - u.union_info.value, "synergy"), unit);
}

MarginalConstraints random_constraints(std::size_t n, std::size_t p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> radius(0.05, 0.95);
    auto draw = [&](std::size_t dim) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
        do {
            for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gauss(rng);
        } while (v.norm() == 0.0);
        return Eigen::VectorXd(v.normalized() * radius(rng));
    };
    MarginalConstraints mc{draw(n), draw(p)};
    return mc;
}

std::vector<MmiTrial> verify_mmi(std::size_t n, std::size_t p, std::size_t trials, std::uint64_t seed,
                                 const OptimizerConfig& config, unsigned threads) {
    std::vector<MmiTrial> out(trials);
    parallel_for(trials, threads, [&](std::size_t i) {
        const MarginalConstraints mc = random_constraints(n, p, mix_seed(seed, 2 * i));
        OptimizerConfig cfg = config;
        cfg.seed = mix_seed(seed, 2 * i + 1);
        cfg.record_trace = false;
        const UnionResult u = minimize_union_information(mc, cfg);

        Eigen::MatrixXd constructive;
        if (mc.a.norm() <= mc.c.norm()) {
            constructive = construct_optimal_cross(mc);
        } else {
            constructive = construct_optimal_cross(MarginalConstraints{mc.c, mc.a}).transpose();
        }
        const double theorem = mc.theorem_value_nats();
        out[i] = MmiTrial{
            .n = n,
            .p = p,
            .theorem_value = theorem,
            .optimizer_value = u.union_info.value,
            .optimizer_gap = u.gap,
            .constructive_gap = union_objective(mc, constructive) - theorem,
            .converged = u.converged,
            .iterations = u.iterations,
        };
    });
    return out;
}

}  // namespace gausspid
