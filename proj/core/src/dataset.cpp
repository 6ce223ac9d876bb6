#include "gausspid/dataset.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "gausspid/errors.hpp"

namespace gausspid {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string where(std::size_t line, std::size_t col) {
    return "line " + std::to_string(line) + ", column " + std::to_string(col + 1);
}

}  // namespace

Dataset Dataset::centered() const {
    Dataset out = *this;
    if (samples.rows() > 0) out.samples.rowwise() -= samples.colwise().mean();
    out.demeaned = true;
    return out;
}

void Dataset::require_samples(std::size_t lags) const {
    const std::size_t needed = variables() * (lags + 1) + 10;
    if (steps() <= needed) {
        throw Error(ErrorCode::kTooFewSamples, "need more than " + std::to_string(needed) + " time steps, got " +
                                                  std::to_string(steps()));
    }
}

Dataset parse_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    Dataset d;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) break;
    }
    if (trim(line).empty()) throw Error(ErrorCode::kParseError, "empty CSV input");
    for (auto f : split_fields(line)) {
        const auto label = trim(f);
        if (label.empty()) throw Error(ErrorCode::kParseError, "empty header label at line " + std::to_string(line_no));
        d.labels.emplace_back(label);
    }
    const std::size_t k = d.labels.size();

    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t blank_run_start = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            if (blank_run_start == 0) blank_run_start = line_no;
            continue;
        }
        if (blank_run_start != 0) {
            throw Error(ErrorCode::kParseError, "blank line inside data at line " + std::to_string(blank_run_start));
        }
        const auto fields = split_fields(line);
        if (fields.size() != k) {
            throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + " has " +
                                                    std::to_string(fields.size()) + " fields, expected " +
                                                    std::to_string(k));
        }
        for (std::size_t c = 0; c < k; ++c) {
            const auto cell = trim(fields[c]);
            if (cell.empty()) throw Error(ErrorCode::kParseError, "missing value at " + where(line_no, c));
            double v = 0.0;
            const char* first = cell.data();
            if (*first == '+') ++first;
            const auto [ptr, ec] = std::from_chars(first, cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
                throw Error(ErrorCode::kParseError, "invalid number '" + std::string(cell) + "' at " + where(line_no, c));
            }
            values.push_back(v);
        }
        ++rows;
    }
    d.samples = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        values.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(k));
    return d;
}

Dataset read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
    return parse_csv(in);
}

void write_csv(std::ostream& out, const Eigen::MatrixXd& samples, const std::vector<std::string>& labels) {
    for (std::size_t c = 0; c < labels.size(); ++c) out << (c ? "," : "") << labels[c];
    out << '\n';
    char buf[32];
    for (Eigen::Index r = 0; r < samples.rows(); ++r) {
        for (Eigen::Index c = 0; c < samples.cols(); ++c) {
            const auto res = std::to_chars(buf, buf + sizeof buf, samples(r, c));
            if (c) out << ',';
            out.write(buf, res.ptr - buf);
        }
        out << '\n';
    }
    if (!out) throw Error(ErrorCode::kIoError, "failed writing CSV output");
}

EstimatedHistory estimate_covariance(const Dataset& d, std::size_t lags) {
    d.require_samples(lags);
    const auto k = static_cast<Eigen::Index>(d.variables());
    const auto l = static_cast<Eigen::Index>(lags);
    const Dataset c = d.demeaned ? d : d.centered();
    const Eigen::Index usable = static_cast<Eigen::Index>(d.steps()) - l;
    const Eigen::Index dim = k * (l + 1);

    Eigen::MatrixXd embed(usable, dim);
    for (Eigen::Index lag = 0; lag <= l; ++lag) {
        embed.middleCols(lag * k, k) = c.samples.middleRows(l - lag, usable);
    }
    embed.rowwise() -= embed.colwise().mean();
    Eigen::MatrixXd cov = (embed.transpose() * embed) / static_cast<double>(usable - 1);
    cov = 0.5 * (cov + cov.transpose()).eval();

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
    const double top = eig.eigenvalues().maxCoeff();
    if (!(top > 0.0) || eig.eigenvalues().minCoeff() <= 1e-13 * top) {
        throw Error(ErrorCode::kNotPositiveDefinite,
                    "sample covariance is rank deficient (constant or exactly collinear columns)");
    }

    std::vector<std::string> labels;
    for (Eigen::Index lag = 0; lag <= l; ++lag) {
        for (Eigen::Index v = 0; v < k; ++v) {
            labels.push_back(d.labels[static_cast<std::size_t>(v)] +
                             (lag == 0 ? "[t]" : "[t-" + std::to_string(lag) + "]"));
        }
    }

    const double scale = cov.trace() / static_cast<double>(dim);
    for (double loading : {0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6}) {
        Eigen::MatrixXd loaded = cov;
        loaded.diagonal().array() += loading * scale;
        try {
            return {HistoryCovariance(CovarianceMatrix(loaded, labels), d.variables(), lags),
                    static_cast<std::size_t>(usable), loading};
        } catch (const Error& e) {
            if (e.code() != ErrorCode::kNotPositiveDefinite && e.code() != ErrorCode::kIllConditioned) throw;
        }
    }
    throw Error(ErrorCode::kNotPositiveDefinite, "sample covariance stays singular after 1e-6 diagonal loading");
}

MvarModel FitResult::model() const {
    if (!stable) {
        throw Error(ErrorCode::kUnstableModel,
                    "fitted model is not stable (spectral radius " + std::to_string(spectral_radius) + ")");
    }
    return MvarModel(coefficients, CovarianceMatrix(noise_cov, labels), labels);
}

FitResult fit_mvar(const Dataset& d, std::size_t order) {
    if (order == 0) throw Error(ErrorCode::kInvalidArgument, "model order must be at least 1");
    d.require_samples(order);
    const auto k = static_cast<Eigen::Index>(d.variables());
    const auto p = static_cast<Eigen::Index>(order);
    const Eigen::Index usable = static_cast<Eigen::Index>(d.steps()) - p;
    const Eigen::Index width = 1 + k * p;

    Eigen::MatrixXd x(usable, width);
    x.col(0).setOnes();
    for (Eigen::Index j = 1; j <= p; ++j) x.middleCols(1 + (j - 1) * k, k) = d.samples.middleRows(p - j, usable);
    const Eigen::MatrixXd y = d.samples.bottomRows(usable);

    const Eigen::LDLT<Eigen::MatrixXd> normal(x.transpose() * x);
    if (normal.info() != Eigen::Success || !normal.isPositive()) {
        throw Error(ErrorCode::kSingularHistory, "lagged regressors are collinear");
    }
    const Eigen::MatrixXd beta = normal.solve(x.transpose() * y);  // width × k
    const Eigen::MatrixXd resid = y - x * beta;

    FitResult r;
    r.labels = d.labels;
    r.usable_rows = static_cast<std::size_t>(usable);
    r.intercept = beta.row(0).transpose();
    for (Eigen::Index j = 0; j < p; ++j) r.coefficients.push_back(beta.middleRows(1 + j * k, k).transpose());
    r.noise_cov = (resid.transpose() * resid) / static_cast<double>(usable - width);
    r.noise_cov = 0.5 * (r.noise_cov + r.noise_cov.transpose()).eval();
    r.spectral_radius = companion_spectral_radius(r.coefficients);
    r.stable = r.spectral_radius < 1.0 - MvarModel::kStabilityMargin;
    return r;
}

}  // namespace gausspid
