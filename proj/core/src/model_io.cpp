#include "gausspid/model_io.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "gausspid/dataset.hpp"
#include "gausspid/errors.hpp"

namespace gausspid {
namespace {

using nlohmann::json;

Eigen::MatrixXd matrix_from_json(const json& j, std::size_t k, const std::string& what) {
    if (!j.is_array()) throw Error(ErrorCode::kParseError, what + " must be an array");
    const auto n = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd m(n, n);
    if (!j.empty() && j.front().is_number()) {
        if (j.size() != k * k) {
            throw Error(ErrorCode::kParseError, what + " has " + std::to_string(j.size()) + " entries, expected " +
                                                    std::to_string(k * k));
        }
        for (Eigen::Index i = 0; i < n * n; ++i) m(i / n, i % n) = j[static_cast<std::size_t>(i)].get<double>();
        return m;
    }
    if (j.size() != k) throw Error(ErrorCode::kParseError, what + " must have " + std::to_string(k) + " rows");
    for (std::size_t r = 0; r < k; ++r) {
        const auto& row = j[r];
        if (!row.is_array() || row.size() != k) {
            throw Error(ErrorCode::kParseError, what + " row " + std::to_string(r) + " must have " +
                                                    std::to_string(k) + " numbers");
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (!row[c].is_number()) throw Error(ErrorCode::kParseError, what + " contains a non-number");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c].get<double>();
        }
    }
    return m;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::string> labels_from_json(const json& j, std::size_t k) {
    if (!j.contains("labels")) return {};
    const auto& l = j.at("labels");
    if (!l.is_array() || l.size() != k) {
        throw Error(ErrorCode::kParseError, "labels must be an array of " + std::to_string(k) + " strings");
    }
    std::vector<std::string> out;
    for (const auto& s : l) {
        if (!s.is_string()) throw Error(ErrorCode::kParseError, "labels must be strings");
        out.push_back(s.get<std::string>());
    }
    return out;
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kParseError, std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

MvarModel parse_model_json(std::string_view text) {
    const json j = parse_json(text);
    if (!j.is_object() || !j.contains("coefficients") || !j.contains("noise_cov")) {
        throw Error(ErrorCode::kParseError, "model JSON needs 'coefficients' and 'noise_cov'");
    }
    const auto& noise = j.at("noise_cov");
    if (!noise.is_array() || noise.empty()) throw Error(ErrorCode::kParseError, "noise_cov must be a non-empty array");
    std::size_t k = noise.size();
    if (noise.front().is_number()) {
        const auto root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(noise.size()))));
        if (root * root != noise.size()) throw Error(ErrorCode::kParseError, "flat noise_cov is not square");
        k = root;
    }
    const Eigen::MatrixXd sigma = matrix_from_json(noise, k, "noise_cov");

    const auto& coeffs = j.at("coefficients");
    if (!coeffs.is_array() || coeffs.empty()) throw Error(ErrorCode::kParseError, "coefficients must be a non-empty array");
    std::vector<Eigen::MatrixXd> a;
    for (std::size_t lag = 0; lag < coeffs.size(); ++lag) {
        a.push_back(matrix_from_json(coeffs[lag], k, "coefficients[" + std::to_string(lag) + "]"));
    }
    if (j.contains("order")) {
        if (!j.at("order").is_number_integer() || j.at("order").get<std::size_t>() != a.size()) {
            throw Error(ErrorCode::kParseError, "order does not match the number of coefficient matrices");
        }
    }
    auto labels = labels_from_json(j, k);
    return MvarModel(std::move(a), CovarianceMatrix(sigma, labels), labels);
}

MvarModel load_model(const std::filesystem::path& path) { return parse_model_json(read_text_file(path)); }

std::string model_to_json(const std::vector<Eigen::MatrixXd>& coefficients, const Eigen::MatrixXd& noise_cov,
                          const std::vector<std::string>& labels) {
    json j;
    j["order"] = coefficients.size();
    j["coefficients"] = json::array();
    for (const auto& a : coefficients) j["coefficients"].push_back(matrix_to_json(a));
    j["noise_cov"] = matrix_to_json(noise_cov);
    j["labels"] = labels;
    return j.dump(2) + "\n";
}

std::string model_to_json(const MvarModel& m) {
    return model_to_json(m.coefficients(), m.noise_cov().matrix(), m.labels());
}

CovarianceMatrix load_covariance(const std::filesystem::path& path) {
    if (path.extension() == ".json") {
        const json j = parse_json(read_text_file(path));
        if (!j.is_object() || !j.contains("matrix")) throw Error(ErrorCode::kParseError, "covariance JSON needs 'matrix'");
        const auto k = j.at("matrix").size();
        return CovarianceMatrix(matrix_from_json(j.at("matrix"), k, "matrix"), labels_from_json(j, k));
    }
    const Dataset d = read_csv(path);
    if (d.steps() != d.variables()) {
        throw Error(ErrorCode::kParseError, "covariance CSV must have as many rows as header labels");
    }
    return CovarianceMatrix(d.samples, d.labels);
}

}  // namespace gausspid
