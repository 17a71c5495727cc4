#include "proxtext/proxies.hpp"

#include "proxtext/csv.hpp"

#include <algorithm>
#include <numeric>

namespace proxtext::proxies {

namespace {

const FeatureBlock& find_block(const Dataset& data, const std::string& name) {
  auto it = data.blocks.find(name);
  if (it == data.blocks.end()) throw DataError("dataset has no feature block '" + name + "'");
  return it->second;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

TrainedLogistic train_logistic_proxy(const Dataset& train, const std::string& block_a,
                                     const std::string& block_b) {
  if (!train.u) throw DataError("training a proxy classifier needs the oracle column U");
  const auto& a = find_block(train, block_a);
  const auto& b = find_block(train, block_b);
  if (a.names != b.names) throw DataError("feature blocks '" + block_a + "' and '" + block_b + "' differ");
  Eigen::MatrixXd averaged = (a.values + b.values) / 2.0;
  const regress::DesignMatrix design(a.names, std::move(averaged));
  return TrainedLogistic{regress::logistic_fit(design, *train.u, regress::ClassWeighting::none), a.names};
}

BinaryColumn predict(const ProxyModel& model, const Dataset& data, const std::string& block) {
  return std::visit(
      overloaded{
          [&](const TrainedLogistic& m) {
            const auto& fb = find_block(data, block);
            Eigen::MatrixXd values(fb.values.rows(), static_cast<Eigen::Index>(m.features.size()));
            for (std::size_t j = 0; j < m.features.size(); ++j) {
              const auto col = fb.column(m.features[j]);
              values.col(static_cast<Eigen::Index>(j)) =
                  Eigen::Map<const Eigen::VectorXd>(col.data(), static_cast<Eigen::Index>(col.size()));
            }
            const auto p = regress::predict_proba(m.model, regress::DesignMatrix(m.features, std::move(values)));
            BinaryColumn out(p.size());
            std::transform(p.begin(), p.end(), out.begin(), [](double v) { return v > 0.5 ? 1 : 0; });
            return out;
          },
          [&](const Threshold& m) {
            const auto col = find_block(data, block).column(m.feature);
            BinaryColumn out(col.size());
            std::transform(col.begin(), col.end(), out.begin(),
                           [&](double v) { return v > m.cutoff ? 1 : 0; });
            return out;
          },
          [&](const External& m) {
            auto it = data.extra.find(m.column);
            if (it == data.extra.end()) throw DataError("dataset has no column '" + m.column + "'");
            return to_binary(it->second, m.column);
          },
      },
      model);
}

std::pair<BinaryColumn, BinaryColumn> load_external_predictions(
    const std::filesystem::path& path, const std::string& w_col, const std::string& z_col,
    std::size_t expected_rows) {
  const auto table = csv::read(path);
  if (expected_rows != 0 && table.rows() != expected_rows) {
    throw DataError("predictions file has " + std::to_string(table.rows()) + " rows, expected " +
                    std::to_string(expected_rows));
  }
  auto w = to_binary(table.column(w_col), w_col);
  auto z = to_binary(table.column(z_col), z_col);
  require_nondegenerate(w, w_col);
  require_nondegenerate(z, z_col);
  return {std::move(w), std::move(z)};
}

ClassificationScores score_against(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) throw DataError("prediction and oracle lengths differ");
  if (predicted.empty()) throw DataError("cannot score an empty column");
  double tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == 1) (truth[i] == 1 ? tp : fp) += 1;
    else (truth[i] == 1 ? fn : tn) += 1;
  }
  const double n = static_cast<double>(predicted.size());
  ClassificationScores s;
  s.accuracy = (tp + tn) / n;
  s.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  s.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  s.positivity = (tp + fp) / n;
  return s;
}

DiagnosticsReport proxy_diagnostics(const Dataset& data) {
  if (!data.u) throw DataError("diagnostics need the oracle column U");
  if (!data.w || !data.z) throw DataError("diagnostics need both proxies W and Z");
  require_nondegenerate(*data.w, "W");
  require_nondegenerate(*data.z, "Z");
  require_nondegenerate(*data.u, "U");

  DiagnosticsReport r;
  r.w = score_against(*data.w, *data.u);
  r.z = score_against(*data.z, *data.u);
  std::size_t same = 0;
  for (std::size_t i = 0; i < data.size(); ++i) same += (*data.w)[i] == (*data.z)[i];
  r.agreement = static_cast<double>(same) / static_cast<double>(data.size());
  const auto wu = oddsratio::gamma_point(*data.w, *data.u, data.covariates);
  const auto zu = oddsratio::gamma_point(*data.z, *data.u, data.covariates);
  r.gamma_wu_c = wu.gamma;
  r.gamma_zu_c = zu.gamma;
  r.gamma_wu_separation = wu.separation;
  r.gamma_zu_separation = zu.separation;
  return r;
}

}  // namespace proxtext::proxies
