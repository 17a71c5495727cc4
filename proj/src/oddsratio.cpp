#include "proxtext/oddsratio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace proxtext::oddsratio {

namespace {

regress::DesignMatrix proxy_design(std::span<const int> z, const std::vector<NamedColumn>& covariates) {
  const auto n = static_cast<Eigen::Index>(z.size());
  Eigen::MatrixXd values(n, static_cast<Eigen::Index>(covariates.size() + 1));
  std::vector<std::string> names{"Z"};
  for (Eigen::Index i = 0; i < n; ++i) values(i, 0) = z[i];
  for (std::size_t k = 0; k < covariates.size(); ++k) {
    if (covariates[k].values.size() != z.size()) {
      throw DataError("covariate '" + covariates[k].name + "' length does not match the proxies");
    }
    names.push_back(covariates[k].name);
    for (Eigen::Index i = 0; i < n; ++i) values(i, static_cast<Eigen::Index>(k + 1)) = covariates[k].values[i];
  }
  return regress::DesignMatrix(std::move(names), std::move(values));
}

}  // namespace

regress::ClassWeighting weighting_for(std::span<const int> target) {
  const double positivity =
      static_cast<double>(std::count(target.begin(), target.end(), 1)) / static_cast<double>(target.size());
  return (positivity < 0.2 || positivity > 0.8) ? regress::ClassWeighting::balanced
                                                : regress::ClassWeighting::none;
}

GammaFit gamma_point(std::span<const int> w, std::span<const int> z,
                     const std::vector<NamedColumn>& covariates) {
  if (w.size() != z.size()) throw DataError("proxy columns differ in length");
  require_binary(w, "W");
  require_binary(z, "Z");
  require_nondegenerate(w, "W");
  require_nondegenerate(z, "Z");

  GammaFit fit;
  fit.weighting = weighting_for(w);
  const auto model = regress::logistic_fit(proxy_design(z, covariates), w, fit.weighting);
  fit.gamma = std::exp(model.coefficient("Z"));
  fit.converged = model.converged;
  fit.separation = model.separation_detected;
  return fit;
}

OddsRatioResult gamma_ci(const Dataset& data, const CiOptions& options) {
  if (!data.w || !data.z) throw DataError("odds ratio needs both proxies W and Z");
  return gamma_ci(*data.w, *data.z, data.covariates, options);
}

OddsRatioResult gamma_ci(std::span<const int> w, std::span<const int> z,
                         const std::vector<NamedColumn>& covariates, const CiOptions& options) {
  if (options.n_boot < 2) throw std::invalid_argument("gamma_ci needs at least two bootstrap replicates");
  const auto point = gamma_point(w, z, covariates);

  const std::size_t n = w.size();
  std::vector<char> flagged(options.n_boot, 0);
  const auto replicates = bootstrap::run_replicates(
      options.n_boot, options.seed, options.parallelism,
      [&](std::size_t b, Rng& rng) -> std::optional<double> {
        const auto rows = bootstrap::resample_rows(n, rng);
        BinaryColumn wb(n), zb(n);
        std::vector<NamedColumn> cb;
        for (std::size_t i = 0; i < n; ++i) {
          wb[i] = w[rows[i]];
          zb[i] = z[rows[i]];
        }
        for (const auto& c : covariates) {
          RealColumn v(n);
          for (std::size_t i = 0; i < n; ++i) v[i] = c.values[rows[i]];
          cb.push_back({c.name, std::move(v)});
        }
        if (is_constant(wb) || is_constant(zb)) return std::nullopt;
        try {
          const auto fit = gamma_point(wb, zb, cb);
          if (!fit.converged) flagged[b] = 1;
          return fit.gamma;
        } catch (const regress::FitError&) {
          return std::nullopt;
        }
      });

  const auto interval = bootstrap::percentile_interval(replicates);
  OddsRatioResult result;
  result.gamma_point = point.gamma;
  result.point_separation = point.separation;
  result.weighting_used = point.weighting;
  result.ci_low = interval.low;
  result.ci_high = interval.high;
  result.n_boot = options.n_boot;
  result.n_excluded = interval.failed;
  result.n_nonconverged = interval.failed + static_cast<std::size_t>(std::count(flagged.begin(), flagged.end(), 1));
  return result;
}

const char* to_string(Verdict v) { return v == Verdict::proceed ? "proceed" : "stop"; }

const char* to_string(GateReason r) {
  switch (r) {
    case GateReason::passed: return "passed";
    case GateReason::ci_low_not_above_one: return "ci_low_not_above_one";
    case GateReason::ci_high_exceeds_gamma_high: return "ci_high_exceeds_gamma_high";
    case GateReason::degenerate_proxy: return "degenerate_proxy";
  }
  return "unknown";
}

GateDecision gate(const OddsRatioResult& result, double gamma_high) {
  if (!(gamma_high > 1.0)) throw std::invalid_argument("gamma_high must exceed 1");
  GateDecision d;
  d.gamma_high_used = gamma_high;
  if (!(1.0 < result.ci_low)) {
    d.reason = GateReason::ci_low_not_above_one;
  } else if (!(result.ci_high < gamma_high)) {
    d.reason = GateReason::ci_high_exceeds_gamma_high;
  } else {
    d.verdict = Verdict::proceed;
    d.reason = GateReason::passed;
  }
  return d;
}

GateDecision degenerate_gate(double gamma_high) {
  return GateDecision{Verdict::stop, GateReason::degenerate_proxy, gamma_high};
}

double crosstab_odds_ratio(std::span<const int> w, std::span<const int> z) {
  if (w.size() != z.size()) throw DataError("proxy columns differ in length");
  require_binary(w, "W");
  require_binary(z, "Z");
  double cells[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < w.size(); ++i) cells[w[i]][z[i]] += 1.0;
  if (cells[0][0] == 0 || cells[0][1] == 0 || cells[1][0] == 0 || cells[1][1] == 0) {
    throw DataError("odds ratio undefined: 2x2 table has an empty cell");
  }
  return (cells[1][1] * cells[0][0]) / (cells[1][0] * cells[0][1]);
}

}  // namespace proxtext::oddsratio
