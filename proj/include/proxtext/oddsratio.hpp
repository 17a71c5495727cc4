#pragma once

#include "proxtext/bootstrap.hpp"
#include "proxtext/dataset.hpp"
#include "proxtext/regress.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace proxtext::oddsratio {

/// Balanced class weighting is used when the positivity of the regression
/// target falls outside [0.2, 0.8].
regress::ClassWeighting weighting_for(std::span<const int> target);

struct GammaFit {
  double gamma = 1.0;
  bool converged = false;
  bool separation = false;
  regress::ClassWeighting weighting = regress::ClassWeighting::none;
};

/// exp(coefficient of Z) in the main-effects logistic model W ~ Z + C.
/// Under separation the clamped coefficient is exponentiated and flagged.
GammaFit gamma_point(std::span<const int> w, std::span<const int> z,
                     const std::vector<NamedColumn>& covariates);

struct OddsRatioResult {
  double gamma_point = 1.0;
  double ci_low = 1.0;
  double ci_high = 1.0;
  std::size_t n_boot = 0;
  /// Replicates that separated, did not converge, or were excluded.
  std::size_t n_nonconverged = 0;
  /// Replicates dropped from the percentiles because a resampled proxy was constant.
  std::size_t n_excluded = 0;
  bool point_separation = false;
  regress::ClassWeighting weighting_used = regress::ClassWeighting::none;
};

struct CiOptions {
  std::size_t n_boot = 200;
  std::uint64_t seed = 0;
  bootstrap::Parallelism parallelism{};
};

/// Bootstrap percentile interval for gamma. Weighting is re-decided in each
/// replicate. Throws bootstrap::BootstrapError when more than 10% of the
/// replicates have to be excluded.
OddsRatioResult gamma_ci(const Dataset& data, const CiOptions& options);
OddsRatioResult gamma_ci(std::span<const int> w, std::span<const int> z,
                         const std::vector<NamedColumn>& covariates, const CiOptions& options);

enum class Verdict { proceed, stop };
enum class GateReason { passed, ci_low_not_above_one, ci_high_exceeds_gamma_high, degenerate_proxy };

const char* to_string(Verdict v);
const char* to_string(GateReason r);

struct GateDecision {
  Verdict verdict = Verdict::stop;
  GateReason reason = GateReason::ci_low_not_above_one;
  double gamma_high_used = 2.0;
};

/// proceed iff 1 < ci_low and ci_high < gamma_high; the lower bound is
/// reported first when both fail.
GateDecision gate(const OddsRatioResult& result, double gamma_high);

/// Stop decision for proxies rejected before any odds ratio is computed.
GateDecision degenerate_gate(double gamma_high);

/// (n11 n00) / (n10 n01) of the 2x2 table; throws on an empty cell.
double crosstab_odds_ratio(std::span<const int> w, std::span<const int> z);

}  // namespace proxtext::oddsratio
