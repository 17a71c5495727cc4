#include "proxtext/synth.hpp"

#include "proxtext/regress.hpp"
#include "proxtext/rng.hpp"

#include <cmath>
#include <numeric>

namespace proxtext::synth {

void SynthParams::validate() const {
  if (n < 100) throw DataError("synthetic sample size must be at least 100");
  if (!(u_prob >= 0.0 && u_prob <= 1.0)) throw DataError("u_prob must lie in [0, 1]");
  const double coefs[] = {true_ace, x1_u, x1_c, x2_exp, x2_u, x2_c, x3_u, x3_c, x4_sq,
                          x4_cube,  x4_u, x4_c, a_u,    a_c,  a_intercept, y_u,  y_c};
  for (double c : coefs)
    if (!std::isfinite(c)) throw DataError("synthetic coefficients must be finite");
}

Dataset generate_fully_synthetic(const SynthParams& params) {
  params.validate();
  const std::size_t n = params.n;
  const auto& block_names = standard_block_names();
  const auto rows = static_cast<Eigen::Index>(n);

  Dataset data;
  data.a.resize(n);
  data.y.resize(n);
  data.u = BinaryColumn(n);
  RealColumn c(n);
  std::vector<Eigen::MatrixXd> blocks(block_names.size(), Eigen::MatrixXd(rows, 4));

  Rng rng(params.seed);
  for (std::size_t i = 0; i < n; ++i) {
    const int u = rng.bernoulli(params.u_prob) ? 1 : 0;
    const double ci = rng.normal();
    for (auto& block : blocks) {
      const auto r = static_cast<Eigen::Index>(i);
      const double x1 = rng.normal() + params.x1_u * u + params.x1_c * ci;
      const double x2 = rng.normal() + params.x2_exp * std::exp(x1) + params.x2_u * u + params.x2_c * ci;
      const double x3 = rng.normal() + params.x3_u * u + params.x3_c * ci;
      const double x4 = rng.normal() + params.x4_sq * x3 * x3 + params.x4_cube * x3 * x3 * x3 +
                        params.x4_u * u + params.x4_c * ci;
      block(r, 0) = x1;
      block(r, 1) = x2;
      block(r, 2) = x3;
      block(r, 3) = x4;
    }
    const double p_treat = regress::expit(params.a_u * u + params.a_c * ci + params.a_intercept);
    const int a = rng.bernoulli(p_treat) ? 1 : 0;
    const double y = rng.normal() + params.true_ace * a + params.y_u * u + params.y_c * ci;
    (*data.u)[i] = u;
    c[i] = ci;
    data.a[i] = a;
    data.y[i] = y;
  }

  data.covariates.push_back({"C", std::move(c)});
  for (std::size_t b = 0; b < block_names.size(); ++b) {
    data.blocks.emplace(block_names[b], FeatureBlock{{"X1", "X2", "X3", "X4"}, std::move(blocks[b])});
  }
  data.validate();
  return data;
}

Dataset overlay_semi_synthetic(const std::vector<NamedColumn>& covariates,
                               std::span<const int> u, const OverlayParams& params) {
  const std::size_t n = u.size();
  require_binary(u, "U");
  for (const auto& col : covariates) {
    if (col.values.size() != n) {
      throw DataError("covariate '" + col.name + "' length does not match U");
    }
    for (double v : col.values)
      if (!std::isfinite(v)) throw DataError("covariate '" + col.name + "' has a non-finite value");
    if (is_binary(col.values) || n == 0) continue;
    const double mean = std::accumulate(col.values.begin(), col.values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : col.values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / n);
    if (std::abs(mean) > 0.1 || sd < 0.9 || sd > 1.1) {
      throw DataError("covariate '" + col.name +
                      "' is not standardized (|mean| > 0.1 or stddev outside [0.9, 1.1])");
    }
  }

  auto coef = [&](const std::map<std::string, double>& m, const std::string& name) {
    auto it = m.find(name);
    return it == m.end() ? params.default_coef : it->second;
  };
  std::vector<double> t_coef, o_coef;
  for (const auto& col : covariates) {
    t_coef.push_back(coef(params.treatment_coef, col.name));
    o_coef.push_back(coef(params.outcome_coef, col.name));
  }

  Dataset data;
  data.a.resize(n);
  data.y.resize(n);
  data.u = BinaryColumn(u.begin(), u.end());
  data.covariates = covariates;
  Rng rng(params.seed);
  for (std::size_t i = 0; i < n; ++i) {
    double t_score = params.treatment_intercept + params.treatment_u * u[i];
    double o_score = params.outcome_u * u[i];
    for (std::size_t k = 0; k < covariates.size(); ++k) {
      t_score += t_coef[k] * covariates[k].values[i];
      o_score += o_coef[k] * covariates[k].values[i];
    }
    data.a[i] = rng.bernoulli(regress::expit(t_score)) ? 1 : 0;
    data.y[i] = rng.normal() + params.true_ace * data.a[i] + o_score;
  }
  data.validate();
  return data;
}

}  // namespace proxtext::synth
