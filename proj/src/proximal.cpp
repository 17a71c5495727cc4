#include "proxtext/proximal.hpp"

#include "proxtext/oddsratio.hpp"

#include <algorithm>
#include <set>

namespace proxtext::proximal {

namespace {

constexpr std::size_t kMinRows = 200;
constexpr std::uint64_t kReplicateStream = 0x5eed;

// Columns named `names` restricted to `rows`, as a design matrix.
regress::DesignMatrix design_for(const std::vector<std::string>& names,
                                 const std::vector<const RealColumn*>& cols,
                                 std::span<const std::size_t> rows) {
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < rows.size(); ++i) values(i, j) = (*cols[j])[rows[i]];
  return regress::DesignMatrix(names, std::move(values));
}

template <typename T>
std::vector<T> pick(const std::vector<T>& src, std::span<const std::size_t> rows) {
  std::vector<T> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(src[r]);
  return out;
}

}  // namespace

ProximalFit estimate_ace_proximal_split(const Dataset& data, std::span<const std::size_t> stage1_rows,
                                        std::span<const std::size_t> stage2_rows, Stage1 stage1) {
  if (!data.w || !data.z) throw DataError("proximal estimation needs both proxies W and Z");
  require_nondegenerate(*data.w, "W");
  require_nondegenerate(*data.z, "Z");

  const RealColumn a = to_real(data.a);
  const RealColumn z = to_real(*data.z);
  std::vector<std::string> names{"A", "Z"};
  std::vector<const RealColumn*> cols{&a, &z};
  for (const auto& c : data.covariates) {
    names.push_back(c.name);
    cols.push_back(&c.values);
  }

  ProximalFit fit;
  const auto x1 = design_for(names, cols, stage1_rows);
  const auto x2 = design_for(names, cols, stage2_rows);
  const auto w1 = pick(*data.w, stage1_rows);
  RealColumn w_hat;
  if (stage1 == Stage1::logistic) {
    if (is_constant(w1)) throw DegenerateProxyError("degenerate proxy: W is constant in the stage-1 split");
    fit.weighting = oddsratio::weighting_for(w1);
    const auto model = regress::logistic_fit(x1, w1, fit.weighting);
    fit.stage1_converged = model.converged;
    fit.stage1_separation = model.separation_detected;
    if (model.separation_detected) fit.warnings.emplace_back("stage-1 logistic fit hit separation");
    else if (!model.converged) fit.warnings.emplace_back("stage-1 logistic fit did not converge");
    w_hat = regress::predict_proba(model, x2);
  } else {
    const auto model = regress::ols_fit(x1, to_real(w1));
    const Eigen::VectorXd pred = model.predict(x2);
    w_hat.assign(pred.data(), pred.data() + pred.size());
  }

  const RealColumn a2 = pick(a, stage2_rows);
  std::vector<std::string> names2{"A", "W_hat"};
  std::vector<std::span<const double>> cols2{a2, w_hat};
  std::vector<RealColumn> cov2;
  cov2.reserve(data.covariates.size());
  for (const auto& c : data.covariates) {
    names2.push_back(c.name);
    cov2.push_back(pick(c.values, stage2_rows));
    cols2.emplace_back(cov2.back());
  }
  const auto y2 = pick(data.y, stage2_rows);
  const auto outcome = regress::ols_fit(regress::DesignMatrix::from_columns(names2, cols2), y2);
  fit.ace = outcome.coefficient("A");
  return fit;
}

ProximalFit estimate_ace_proximal(const Dataset& data, std::uint64_t seed, Stage1 stage1) {
  if (data.size() < kMinRows) throw DataError("proximal estimation needs at least 200 rows");
  Rng rng(seed);
  const auto order = bootstrap::shuffled_rows(data.size(), rng);
  const std::size_t half = data.size() / 2;
  const std::span<const std::size_t> all(order);
  return estimate_ace_proximal_split(data, all.first(half), all.subspan(half), stage1);
}

double estimate_ace_backdoor(const Dataset& data, const std::vector<std::string>& adjust) {
  std::vector<std::string> names{"A"};
  std::vector<RealColumn> storage{to_real(data.a)};
  for (const auto& name : adjust) {
    if (name == "A" || name == "Y") throw DataError("backdoor adjustment set cannot contain A or Y");
    names.push_back(name);
    storage.push_back(data.numeric_column(name));
  }
  std::vector<std::span<const double>> cols(storage.begin(), storage.end());
  return regress::ols_fit(regress::DesignMatrix::from_columns(names, cols), data.y).coefficient("A");
}

const char* to_string(AceMethod m) {
  switch (m) {
    case AceMethod::proximal: return "proximal";
    case AceMethod::backdoor_proxy: return "backdoor_proxy";
    case AceMethod::backdoor_oracle: return "backdoor_oracle";
  }
  return "unknown";
}

AceEstimate ace_ci(const Dataset& data, const AceSpec& spec, const AceCiOptions& options) {
  if (options.n_boot < 2) throw std::invalid_argument("ace_ci needs at least two bootstrap replicates");
  AceEstimate est;
  est.n_boot = options.n_boot;
  est.split_seed = options.seed;
  est.adjust = spec.adjust;
  if (spec.proximal) {
    est.method = AceMethod::proximal;
    auto fit = estimate_ace_proximal(data, options.seed, spec.stage1);
    est.point = fit.ace;
    est.warnings = std::move(fit.warnings);
  } else {
    const bool oracle = std::find(spec.adjust.begin(), spec.adjust.end(), "U") != spec.adjust.end();
    est.method = oracle ? AceMethod::backdoor_oracle : AceMethod::backdoor_proxy;
    est.point = estimate_ace_backdoor(data, spec.adjust);
  }

  const std::size_t n = data.size();
  const auto replicates = bootstrap::run_replicates(
      options.n_boot, derive_seed(options.seed, kReplicateStream), options.parallelism,
      [&](std::size_t, Rng& rng) -> std::optional<double> {
        const auto rows = bootstrap::resample_rows(n, rng);
        const Dataset sample = data.take_rows(rows);
        try {
          if (!spec.proximal) return estimate_ace_backdoor(sample, spec.adjust);
          const auto order = bootstrap::shuffled_rows(n, rng);
          const std::span<const std::size_t> all(order);
          return estimate_ace_proximal_split(sample, all.first(n / 2), all.subspan(n / 2), spec.stage1).ace;
        } catch (const regress::FitError&) {
          return std::nullopt;
        } catch (const DegenerateProxyError&) {
          return std::nullopt;
        }
      });
  const auto interval = bootstrap::percentile_interval(replicates);
  est.ci_low = interval.low;
  est.ci_high = interval.high;
  est.n_failed = interval.failed;
  return est;
}

bool completeness_check(std::span<const double> w, std::span<const double> z, std::size_t u_cardinality) {
  const std::set<double> wv(w.begin(), w.end());
  const std::set<double> zv(z.begin(), z.end());
  return std::min(wv.size(), zv.size()) >= u_cardinality;
}

}  // namespace proxtext::proximal
