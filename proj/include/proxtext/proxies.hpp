#pragma once

#include "proxtext/dataset.hpp"
#include "proxtext/oddsratio.hpp"
#include "proxtext/regress.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace proxtext::proxies {

/// Logistic classifier of U on feature columns; labels are 1{p > 0.5}.
struct TrainedLogistic {
  regress::LogisticModel model;
  std::vector<std::string> features;
};

/// 1{feature > cutoff}, strict.
struct Threshold {
  std::string feature;
  double cutoff = 0.0;
};

/// A binary column stored in Dataset::extra, passed through unchanged.
struct External {
  std::string column;
};

using ProxyModel = std::variant<TrainedLogistic, Threshold, External>;

/// Fits U on the element-wise average of two feature blocks.
TrainedLogistic train_logistic_proxy(const Dataset& train, const std::string& block_a,
                                     const std::string& block_b);

/// Hard labels for `block` (ignored by External models).
BinaryColumn predict(const ProxyModel& model, const Dataset& data, const std::string& block);

/// Reads pre-binarized W and Z predictions from a CSV. Rejects non-binary
/// values, a row count different from `expected_rows` (when nonzero) and
/// constant columns.
std::pair<BinaryColumn, BinaryColumn> load_external_predictions(
    const std::filesystem::path& path, const std::string& w_col, const std::string& z_col,
    std::size_t expected_rows = 0);

struct ClassificationScores {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double positivity = 0.0;
};

/// Scores of `predicted` against `truth`. Precision (recall) is 0 when
/// there are no predicted (true) positives.
ClassificationScores score_against(std::span<const int> predicted, std::span<const int> truth);

struct DiagnosticsReport {
  ClassificationScores w;
  ClassificationScores z;
  double agreement = 0.0;
  double gamma_wu_c = 1.0;
  double gamma_zu_c = 1.0;
  bool gamma_wu_separation = false;
  bool gamma_zu_separation = false;
};

/// Oracle diagnostics for both proxies; requires W, Z and U, all non-constant.
DiagnosticsReport proxy_diagnostics(const Dataset& data);

}  // namespace proxtext::proxies
