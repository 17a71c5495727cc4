#pragma once

#include "proxtext/bootstrap.hpp"
#include "proxtext/dataset.hpp"
#include "proxtext/regress.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace proxtext::proximal {

/// Stage-1 model for E[W | A, Z, C].
enum class Stage1 { logistic, linear };

struct ProximalFit {
  double ace = 0.0;
  bool stage1_converged = true;
  bool stage1_separation = false;
  regress::ClassWeighting weighting = regress::ClassWeighting::none;
  std::vector<std::string> warnings;
};

/// Two-stage estimator on an explicit split: stage 1 fits W ~ A + Z + C on
/// `stage1_rows`, stage 2 fits Y ~ A + W_hat + C on `stage2_rows` and
/// returns the A coefficient.
ProximalFit estimate_ace_proximal_split(const Dataset& data, std::span<const std::size_t> stage1_rows,
                                        std::span<const std::size_t> stage2_rows,
                                        Stage1 stage1 = Stage1::logistic);

/// Seeded shuffle, 50/50 split, then the two-stage estimator. Needs
/// non-constant W and Z and at least 200 rows.
ProximalFit estimate_ace_proximal(const Dataset& data, std::uint64_t seed,
                                  Stage1 stage1 = Stage1::logistic);

/// A coefficient of the OLS fit Y ~ A + adjust on all rows.
double estimate_ace_backdoor(const Dataset& data, const std::vector<std::string>& adjust);

enum class AceMethod { proximal, backdoor_proxy, backdoor_oracle };
const char* to_string(AceMethod m);

struct AceSpec {
  /// proximal, or backdoor (tagged backdoor_oracle when `adjust` names U).
  bool proximal = true;
  std::vector<std::string> adjust;
  Stage1 stage1 = Stage1::logistic;

  static AceSpec proximal_default() { return {}; }
  static AceSpec backdoor(std::vector<std::string> adjust) { return {false, std::move(adjust), Stage1::logistic}; }
};

struct AceEstimate {
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  AceMethod method = AceMethod::proximal;
  std::vector<std::string> adjust;
  std::size_t n_boot = 0;
  std::size_t n_failed = 0;
  std::uint64_t split_seed = 0;
  std::vector<std::string> warnings;
};

struct AceCiOptions {
  std::size_t n_boot = 200;
  std::uint64_t seed = 0;
  bootstrap::Parallelism parallelism{};
};

/// Point estimate plus bootstrap percentile CI; every replicate re-runs the
/// full estimator, including a fresh split for the proximal method.
AceEstimate ace_ci(const Dataset& data, const AceSpec& spec, const AceCiOptions& options);

/// Cardinality sufficient condition for completeness:
/// min(#distinct Z, #distinct W) >= u_cardinality.
bool completeness_check(std::span<const double> w, std::span<const double> z, std::size_t u_cardinality);

}  // namespace proxtext::proximal
