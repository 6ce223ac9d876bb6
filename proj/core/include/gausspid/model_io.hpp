#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gausspid/covariance.hpp"
#include "gausspid/mvar.hpp"

namespace gausspid {

/// Model files are JSON objects
///   {"order": p, "coefficients": [A_1, …, A_p], "noise_cov": Σε, "labels": [...]}
/// where each matrix is a list of rows. A coefficient matrix may also be a
/// flat row-major list of k² numbers. "order" and "labels" are optional.
[[nodiscard]] MvarModel parse_model_json(std::string_view text);
[[nodiscard]] MvarModel load_model(const std::filesystem::path& path);

[[nodiscard]] std::string model_to_json(const std::vector<Eigen::MatrixXd>& coefficients,
                                        const Eigen::MatrixXd& noise_cov, const std::vector<std::string>& labels);
[[nodiscard]] std::string model_to_json(const MvarModel& m);

/// CSV (header of labels, then k rows of k numbers) or JSON
/// {"labels": [...], "matrix": [[...], ...]}, chosen by the .json extension.
[[nodiscard]] CovarianceMatrix load_covariance(const std::filesystem::path& path);

[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);

}  // namespace gausspid
