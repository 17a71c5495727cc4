#pragma once

#include "proxtext/bootstrap.hpp"
#include "proxtext/oddsratio.hpp"
#include "proxtext/proximal.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace proxtext::experiments {

/// Proxy designs on the fully synthetic generator. The trained proxy is a
/// logistic classifier of U fit on the average of the train1/train2 blocks;
/// the heuristic proxy is 1{X1 > 1.1}.
///   p1m       W = trained(inf2), Z = trained(inf1)
///   p1m_same  W = trained(inf1), Z = trained(inf1)
///   p2m       W = trained(inf2), Z = heuristic(inf1)
///   p2m_same  W = trained(inf1), Z = heuristic(inf1)
enum class Design { p1m, p1m_same, p2m, p2m_same };
const char* to_string(Design d);
std::vector<Design> table1_designs();
/// Whether a design's proxies are read from distinct text realizations.
bool is_valid_design(Design d);

inline constexpr double kHeuristicCutoff = 1.1;

/// Generates the fully synthetic data for `seed` and attaches proxies.
Dataset make_design_data(Design design, std::size_t n, std::uint64_t seed);
/// Attaches proxies for `design` to data that already carries the four
/// standard blocks and the oracle U.
void attach_design(Dataset& data, Design design);

struct ExperimentOptions {
  std::size_t n = 10000;
  std::uint64_t seed = 0;
  std::size_t n_boot = 200;
  double gamma_high = 2.0;
  bootstrap::Parallelism parallelism{};
};

struct Table1Row {
  Design design = Design::p1m;
  oddsratio::OddsRatioResult odds_ratio;
  oddsratio::GateDecision gate;
  proximal::AceEstimate ace;
  double bias = 0.0;
  bool covers_truth = false;
};

struct Table1 {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  double true_ace = 1.3;
  std::vector<Table1Row> rows;
};

/// All four designs on one seeded dataset. The ACE is estimated for every
/// row, including those the gate stops, so the bias pattern is visible.
Table1 run_table1_experiment(const ExperimentOptions& options);

struct GotchaRow {
  std::string arm;
  double estimate = 0.0;
  double bias = 0.0;
};

/// Backdoor with the trained proxy, backdoor with the oracle U, and the
/// proximal estimator with valid and same-text proxies, on one dataset.
std::vector<GotchaRow> run_gotcha_bench(std::size_t n, std::uint64_t seed);

}  // namespace proxtext::experiments
