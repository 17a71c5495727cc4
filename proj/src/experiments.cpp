#include "proxtext/experiments.hpp"

#include "proxtext/proxies.hpp"
#include "proxtext/rng.hpp"
#include "proxtext/synth.hpp"

#include <cmath>
#include <stdexcept>

namespace proxtext::experiments {

namespace {

// Fixed stream tags so that the odds-ratio bootstrap, the ACE bootstrap and
// the estimator split never share random numbers.
constexpr std::uint64_t kGammaStream = 1;
constexpr std::uint64_t kAceStream = 2;

void require_size(std::size_t n) {
  if (n < 1000) throw std::invalid_argument("experiments need n >= 1000");
}

}  // namespace

const char* to_string(Design d) {
  switch (d) {
    case Design::p1m: return "P1M";
    case Design::p1m_same: return "P1M-same";
    case Design::p2m: return "P2M";
    case Design::p2m_same: return "P2M-same";
  }
  return "unknown";
}

std::vector<Design> table1_designs() { return {Design::p1m, Design::p1m_same, Design::p2m, Design::p2m_same}; }

bool is_valid_design(Design d) { return d == Design::p1m || d == Design::p2m; }

void attach_design(Dataset& data, Design design) {
  const auto trained = proxies::train_logistic_proxy(data, "train1", "train2");
  const proxies::Threshold heuristic{"X1", kHeuristicCutoff};
  switch (design) {
    case Design::p1m:
      data.w = proxies::predict(trained, data, "inf2");
      data.z = proxies::predict(trained, data, "inf1");
      break;
    case Design::p1m_same:
      data.w = proxies::predict(trained, data, "inf1");
      data.z = data.w;
      break;
    case Design::p2m:
      data.w = proxies::predict(trained, data, "inf2");
      data.z = proxies::predict(heuristic, data, "inf1");
      break;
    case Design::p2m_same:
      data.w = proxies::predict(trained, data, "inf1");
      data.z = proxies::predict(heuristic, data, "inf1");
      break;
  }
}

Dataset make_design_data(Design design, std::size_t n, std::uint64_t seed) {
  synth::SynthParams p;
  p.n = n;
  p.seed = seed;
  auto data = synth::generate_fully_synthetic(p);
  attach_design(data, design);
  return data;
}

Table1 run_table1_experiment(const ExperimentOptions& options) {
  require_size(options.n);
  synth::SynthParams p;
  p.n = options.n;
  p.seed = options.seed;
  const auto base = synth::generate_fully_synthetic(p);

  Table1 table;
  table.seed = options.seed;
  table.n = options.n;
  table.true_ace = p.true_ace;
  for (const auto design : table1_designs()) {
    auto data = base;
    attach_design(data, design);

    Table1Row row;
    row.design = design;
    oddsratio::CiOptions gopt{options.n_boot, derive_seed(options.seed, kGammaStream), options.parallelism};
    row.odds_ratio = oddsratio::gamma_ci(data, gopt);
    row.gate = oddsratio::gate(row.odds_ratio, options.gamma_high);

    proximal::AceCiOptions aopt{options.n_boot, derive_seed(options.seed, kAceStream), options.parallelism};
    row.ace = proximal::ace_ci(data, proximal::AceSpec::proximal_default(), aopt);
    row.bias = row.ace.point - p.true_ace;
    row.covers_truth = row.ace.ci_low <= p.true_ace && p.true_ace <= row.ace.ci_high;
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<GotchaRow> run_gotcha_bench(std::size_t n, std::uint64_t seed) {
  require_size(n);
  synth::SynthParams p;
  p.n = n;
  p.seed = seed;
  const auto base = synth::generate_fully_synthetic(p);
  const auto split_seed = derive_seed(seed, kAceStream);

  auto valid = base;
  attach_design(valid, Design::p1m);
  auto same = base;
  attach_design(same, Design::p1m_same);

  std::vector<GotchaRow> rows;
  auto add = [&](std::string arm, double estimate) {
    rows.push_back({std::move(arm), estimate, estimate - p.true_ace});
  };
  add("backdoor_proxy", proximal::estimate_ace_backdoor(valid, {"W", "C"}));
  add("backdoor_oracle", proximal::estimate_ace_backdoor(valid, {"U", "C"}));
  add("proximal_valid", proximal::estimate_ace_proximal(valid, split_seed).ace);
  add("proximal_same", proximal::estimate_ace_proximal(same, split_seed).ace);
  return rows;
}

}  // namespace proxtext::experiments
