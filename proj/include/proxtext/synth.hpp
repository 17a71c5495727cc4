#pragma once

#include "proxtext/dataset.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace proxtext::synth {

/// Structural coefficients of the fully synthetic process. Per row:
///   U ~ Bernoulli(u_prob), C ~ N(0, 1)
///   X1 = e + x1_u U + x1_c C
///   X2 = e + x2_exp exp(X1) + x2_u U + x2_c C
///   X3 = e + x3_u U + x3_c C
///   X4 = e + x4_sq X3^2 + x4_cube X3^3 + x4_u U + x4_c C
///   A ~ Bernoulli(expit(a_u U + a_c C + a_intercept))
///   Y = e + true_ace A + y_u U + y_c C
struct SynthParams {
  std::size_t n = 10000;
  std::uint64_t seed = 0;
  double true_ace = 1.3;
  double u_prob = 0.48;
  double x1_u = 1.95, x1_c = 3.0;
  double x2_exp = 1.0, x2_u = 1.0, x2_c = 3.0;
  double x3_u = 1.25, x3_c = 3.0;
  double x4_sq = 1.0, x4_cube = 0.5, x4_u = 1.0, x4_c = 3.0;
  double a_u = 0.8, a_c = 1.0, a_intercept = -0.3;
  double y_u = 0.8, y_c = 1.0;

  void validate() const;
};

/// Fully synthetic dataset with oracle U, covariate C and four feature blocks
/// (train1, train2, inf1, inf2) sharing each row's U and C.
///
/// Draw order per row: U, C, then each block in that order with X1..X4
/// noise terms, then the treatment uniform, then the outcome noise.
Dataset generate_fully_synthetic(const SynthParams& params);

/// Overlay of synthetic treatment and outcome on real covariates:
///   A ~ Bernoulli(expit(treatment_intercept + treatment_u U + sum_k t_k C_k))
///   Y = e + true_ace A + outcome_u U + sum_k o_k C_k
/// Coefficients not listed in the maps default to default_coef.
struct OverlayParams {
  std::uint64_t seed = 0;
  double true_ace = 1.3;
  double treatment_intercept = 0.0;
  double treatment_u = 1.0;
  double outcome_u = 1.0;
  double default_coef = 0.9;
  std::map<std::string, double> treatment_coef;
  std::map<std::string, double> outcome_coef;
};

/// Continuous (non 0/1) covariates must already be standardized:
/// |mean| <= 0.1 and stddev in [0.9, 1.1]. Draw order per row: A, then Y.
Dataset overlay_semi_synthetic(const std::vector<NamedColumn>& covariates,
                               std::span<const int> u, const OverlayParams& params);

}  // namespace proxtext::synth
