#include "proxtext/csv.hpp"
#include "proxtext/dag.hpp"
#include "proxtext/experiments.hpp"
#include "proxtext/oddsratio.hpp"
#include "proxtext/pipeline.hpp"
#include "proxtext/proximal.hpp"
#include "proxtext/proxies.hpp"
#include "proxtext/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace proxtext;
using nlohmann::json;

namespace {

constexpr int kExitProceed = 0;
constexpr int kExitError = 1;
constexpr int kExitStop = 2;
constexpr const char* kSeedEnv = "PROXTEXT_SEED";

// Columns of an input CSV and their roles.
struct DataFlags {
  std::string path;
  std::string a_col = "A";
  std::string y_col = "Y";
  std::vector<std::string> covariates;
  std::string w_col;
  std::string z_col;
  std::string u_col;

  void add_to(CLI::App* app, bool need_proxies) {
    app->add_option("--data", path, "input CSV")->required()->check(CLI::ExistingFile);
    app->add_option("--a-col", a_col, "treatment column")->capture_default_str();
    app->add_option("--y-col", y_col, "outcome column")->capture_default_str();
    app->add_option("--covariates", covariates, "observed confounder columns");
    auto* w = app->add_option("--w-col", w_col, "proxy W column");
    auto* z = app->add_option("--z-col", z_col, "proxy Z column");
    if (need_proxies) {
      w->required();
      z->required();
    }
    app->add_option("--u-col", u_col, "oracle U column (synthetic data only)");
  }

  csv::ColumnRoles roles() const {
    csv::ColumnRoles r;
    r.treatment = a_col;
    r.outcome = y_col;
    r.covariates = covariates;
    if (!w_col.empty()) r.w = w_col;
    if (!z_col.empty()) r.z = z_col;
    if (!u_col.empty()) r.u = u_col;
    return r;
  }

  Dataset load() const { return csv::to_dataset(csv::read(path), roles()); }
};

void emit(const json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << j.dump(2) << '\n';
}

std::string read_text(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Graph selection plus role assignment for structural checks.
struct GraphFlags {
  std::string builtin;
  std::string edges;
  dag::RoleAssignment roles = dag::standard_roles();
  std::vector<std::string> covariates;

  void add_to(CLI::App* app) {
    auto* b = app->add_option("--graph", builtin, "builtin graph name");
    auto* e = app->add_option("--edges", edges, "edge-list file ('a -> b' per line)")->check(CLI::ExistingFile);
    b->excludes(e);
    app->add_option("--treatment", roles.treatment)->capture_default_str();
    app->add_option("--outcome", roles.outcome)->capture_default_str();
    app->add_option("--unmeasured", roles.unmeasured)->capture_default_str();
    app->add_option("--observed", covariates, "observed covariate nodes (default C)");
    app->add_option("--proxy-w", roles.proxy_w)->capture_default_str();
    app->add_option("--proxy-z", roles.proxy_z)->capture_default_str();
    app->add_option("--u-levels", roles.unmeasured_levels)->capture_default_str();
    app->add_option("--w-levels", roles.proxy_w_levels)->capture_default_str();
    app->add_option("--z-levels", roles.proxy_z_levels)->capture_default_str();
  }

  bool given() const { return !builtin.empty() || !edges.empty(); }

  pipeline::StructureSpec resolve() const {
    pipeline::StructureSpec s{builtin.empty() ? dag::parse_edge_list(read_text(edges)) : dag::builtin_graph(builtin),
                              roles};
    if (!covariates.empty()) s.roles.observed_covariates = {covariates.begin(), covariates.end()};
    return s;
  }
};

json table1_json(const experiments::Table1& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"design", experiments::to_string(r.design)},
                    {"odds_ratio", pipeline::to_json(r.odds_ratio)},
                    {"gate", pipeline::to_json(r.gate)},
                    {"ace", pipeline::to_json(r.ace)},
                    {"bias", r.bias},
                    {"covers_truth", r.covers_truth}});
  }
  return {{"seed", t.seed}, {"n", t.n}, {"true_ace", t.true_ace}, {"rows", rows}};
}

void print_table1_text(const std::vector<experiments::Table1>& tables) {
  std::printf("%-6s %-9s %-27s %-8s %-7s %-8s %-17s %s\n", "seed", "design", "gamma CI", "gate", "ACE", "bias",
              "ACE CI", "covers");
  for (const auto& t : tables) {
    for (const auto& r : t.rows) {
      std::printf("%-6llu %-9s (%10.4g, %10.4g)   %-8s %-7.3f %-8.3f (%.3f, %.3f)    %s\n",
                  static_cast<unsigned long long>(t.seed), experiments::to_string(r.design), r.odds_ratio.ci_low,
                  r.odds_ratio.ci_high, oddsratio::to_string(r.gate.verdict), r.ace.point, r.bias, r.ace.ci_low,
                  r.ace.ci_high, r.covers_truth ? "yes" : "no");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proximal causal inference with text-derived proxies"};
  app.require_subcommand(1);
  std::string out;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "master seed")->envname(kSeedEnv)->capture_default_str();
  };
  auto add_threads = [&](CLI::App* cmd) {
    cmd->add_option("--threads", threads, "bootstrap worker threads (0 = all cores)")->capture_default_str();
  };
  auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out,-o", out, "output path (default stdout)"); };

  // simulate
  auto* simulate = app.add_subcommand("simulate", "generate a synthetic dataset as CSV");
  std::string dgp = "full";
  std::size_t n = 10000;
  std::string cov_file, sim_u_col;
  std::vector<std::string> sim_covariates;
  simulate->add_option("--dgp", dgp, "full | semi")->check(CLI::IsMember({"full", "semi"}))->capture_default_str();
  simulate->add_option("--n", n, "rows (full DGP)")->capture_default_str();
  simulate->add_option("--covariates-file", cov_file, "CSV with real covariates and U (semi DGP)");
  simulate->add_option("--covariates", sim_covariates, "covariate columns of --covariates-file");
  simulate->add_option("--u-col", sim_u_col, "oracle U column of --covariates-file");
  add_seed(simulate);
  add_out(simulate);

  // dag check
  auto* dag_cmd = app.add_subcommand("dag", "causal graph utilities");
  dag_cmd->require_subcommand(1);
  auto* dag_check = dag_cmd->add_subcommand("check", "check P1-P4 for a proxy design");
  GraphFlags graph;
  graph.add_to(dag_check);
  auto* dag_list = dag_cmd->add_subcommand("list", "list builtin graphs");

  // gate
  auto* gate_cmd = app.add_subcommand("gate", "odds-ratio falsification gate");
  DataFlags gate_data;
  gate_data.add_to(gate_cmd, true);
  double gamma_high = 2.0;
  std::size_t n_boot = 200;
  gate_cmd->add_option("--gamma-high", gamma_high)->capture_default_str();
  gate_cmd->add_option("--boot", n_boot, "bootstrap replicates")->capture_default_str();
  add_seed(gate_cmd);
  add_threads(gate_cmd);
  add_out(gate_cmd);

  // estimate
  auto* estimate_cmd = app.add_subcommand("estimate", "ACE estimate with bootstrap CI");
  DataFlags est_data;
  est_data.add_to(estimate_cmd, false);
  std::string method = "proximal", stage1 = "logistic";
  std::vector<std::string> adjust;
  estimate_cmd->add_option("--method", method)->check(CLI::IsMember({"proximal", "backdoor"}))->capture_default_str();
  estimate_cmd->add_option("--adjust", adjust, "backdoor adjustment set (W, Z, U or covariate names)");
  estimate_cmd->add_option("--stage1", stage1)->check(CLI::IsMember({"logistic", "linear"}))->capture_default_str();
  estimate_cmd->add_option("--boot", n_boot)->capture_default_str();
  add_seed(estimate_cmd);
  add_threads(estimate_cmd);
  add_out(estimate_cmd);

  // diagnostics
  auto* diag_cmd = app.add_subcommand("diagnostics", "proxy quality against the oracle U");
  DataFlags diag_data;
  diag_data.add_to(diag_cmd, true);
  add_out(diag_cmd);

  // pipeline
  auto* pipe_cmd = app.add_subcommand("pipeline", "full analysis: proxies, gate, and ACE on proceed");
  std::string pipe_csv, pipe_w, pipe_z;
  DataFlags pipe_roles;
  bool allow_same = false;
  pipe_cmd->add_option("--data", pipe_csv, "input CSV (omit to use the synthetic generator)")->check(CLI::ExistingFile);
  pipe_cmd->add_option("--a-col", pipe_roles.a_col)->capture_default_str();
  pipe_cmd->add_option("--y-col", pipe_roles.y_col)->capture_default_str();
  pipe_cmd->add_option("--covariates", pipe_roles.covariates, "covariate columns (default C for the generator)");
  pipe_cmd->add_option("--u-col", pipe_roles.u_col, "oracle U column");
  pipe_cmd->add_option("--n", n, "rows for the synthetic generator")->capture_default_str();
  pipe_cmd->add_option("--w", pipe_w, "W source: col:NAME | file:PATH:COL | logistic:BLOCK | threshold:BLOCK:FEATURE:CUTOFF")
      ->required();
  pipe_cmd->add_option("--z", pipe_z, "Z source (same forms as --w)")->required();
  pipe_cmd->add_flag("--allow-same-source", allow_same, "permit W and Z from the same text");
  pipe_cmd->add_option("--gamma-high", gamma_high)->capture_default_str();
  pipe_cmd->add_option("--boot", n_boot)->capture_default_str();
  pipe_cmd->add_option("--stage1", stage1)->check(CLI::IsMember({"logistic", "linear"}))->capture_default_str();
  GraphFlags pipe_graph;
  pipe_graph.add_to(pipe_cmd);
  add_seed(pipe_cmd);
  add_threads(pipe_cmd);
  add_out(pipe_cmd);

  // bench
  auto* bench = app.add_subcommand("bench", "replication experiments");
  bench->require_subcommand(1);
  std::size_t seeds = 10;
  std::string format = "json";
  auto* table1 = bench->add_subcommand("table1", "four proxy designs on the synthetic generator");
  table1->add_option("--n", n)->capture_default_str();
  table1->add_option("--seeds", seeds, "number of seeds, starting at --seed")->capture_default_str();
  table1->add_option("--boot", n_boot)->capture_default_str();
  table1->add_option("--gamma-high", gamma_high)->capture_default_str();
  table1->add_option("--format", format)->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  add_seed(table1);
  add_threads(table1);
  add_out(table1);
  auto* gotchas = bench->add_subcommand("gotchas", "backdoor-with-proxy versus proximal estimates");
  std::size_t gotcha_n = 100000;
  std::size_t gotcha_seeds = 5;
  gotchas->add_option("--n", gotcha_n)->capture_default_str();
  gotchas->add_option("--seeds", gotcha_seeds)->capture_default_str();
  add_seed(gotchas);
  add_out(gotchas);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      Dataset d;
      if (dgp == "full") {
        synth::SynthParams p;
        p.n = n;
        p.seed = seed;
        d = synth::generate_fully_synthetic(p);
      } else {
        if (cov_file.empty() || sim_u_col.empty() || sim_covariates.empty()) {
          throw std::runtime_error("--dgp semi needs --covariates-file, --covariates and --u-col");
        }
        const auto t = csv::read(cov_file);
        std::vector<NamedColumn> cov;
        for (const auto& c : sim_covariates) cov.push_back({c, t.column(c)});
        synth::OverlayParams op;
        op.seed = seed;
        d = synth::overlay_semi_synthetic(cov, to_binary(t.column(sim_u_col), sim_u_col), op);
      }
      const auto text = csv::format(csv::from_dataset(d));
      if (out.empty() || out == "-") {
        std::cout << text;
      } else {
        std::ofstream(out) << text;
      }
      return kExitProceed;
    }

    if (dag_list->parsed()) {
      for (const auto& name : dag::builtin_graph_names()) std::cout << name << '\n';
      return kExitProceed;
    }

    if (dag_check->parsed()) {
      if (!graph.given()) throw std::runtime_error("dag check needs --graph or --edges");
      const auto spec = graph.resolve();
      const auto report = dag::check_proximal_structure(spec.graph, spec.roles);
      std::cout << pipeline::to_json(report).dump(2) << '\n';
      const bool ok = report.p1_holds && report.p2_holds && report.p3_holds && report.p4_cardinality_ok;
      return ok ? kExitProceed : kExitStop;
    }

    if (gate_cmd->parsed()) {
      const auto d = gate_data.load();
      const bool degenerate = is_constant(*d.w) || is_constant(*d.z);
      json j;
      if (degenerate) {
        j["odds_ratio"] = nullptr;
        j["gate"] = pipeline::to_json(oddsratio::degenerate_gate(gamma_high));
      } else {
        const auto r = oddsratio::gamma_ci(d, {n_boot, seed, {threads}});
        j["odds_ratio"] = pipeline::to_json(r);
        j["gate"] = pipeline::to_json(oddsratio::gate(r, gamma_high));
      }
      emit(j, out);
      return j["gate"]["verdict"] == "proceed" ? kExitProceed : kExitStop;
    }

    if (estimate_cmd->parsed()) {
      const auto d = est_data.load();
      proximal::AceSpec spec;
      if (method == "proximal") {
        spec.stage1 = stage1 == "linear" ? proximal::Stage1::linear : proximal::Stage1::logistic;
      } else {
        if (adjust.empty()) throw std::runtime_error("--method backdoor needs --adjust");
        spec = proximal::AceSpec::backdoor(adjust);
      }
      emit(pipeline::to_json(proximal::ace_ci(d, spec, {n_boot, seed, {threads}})), out);
      return kExitProceed;
    }

    if (diag_cmd->parsed()) {
      if (diag_data.u_col.empty()) throw std::runtime_error("diagnostics needs --u-col");
      emit(pipeline::to_json(proxies::proxy_diagnostics(diag_data.load())), out);
      return kExitProceed;
    }

    if (pipe_cmd->parsed()) {
      pipeline::PipelineConfig cfg;
      if (pipe_csv.empty()) {
        synth::SynthParams p;
        p.n = n;
        p.seed = seed;
        cfg.data = pipeline::SynthSource{p};
      } else {
        pipe_roles.path = pipe_csv;
        cfg.data = pipeline::CsvSource{pipe_csv, pipe_roles.roles()};
      }
      cfg.w = pipeline::ProxySource::parse(pipe_w);
      cfg.z = pipeline::ProxySource::parse(pipe_z);
      cfg.allow_same_source = allow_same;
      cfg.gamma_high = gamma_high;
      cfg.n_boot = n_boot;
      cfg.seed = seed;
      cfg.threads = threads;
      cfg.stage1 = stage1 == "linear" ? proximal::Stage1::linear : proximal::Stage1::logistic;
      if (pipe_graph.given()) cfg.structure = pipe_graph.resolve();
      const auto report = pipeline::run_pipeline(cfg);
      emit(pipeline::to_json(report), out);
      return report.gate.verdict == oddsratio::Verdict::proceed ? kExitProceed : kExitStop;
    }

    if (table1->parsed()) {
      std::vector<experiments::Table1> tables;
      for (std::size_t k = 0; k < seeds; ++k) {
        experiments::ExperimentOptions opt;
        opt.n = n;
        opt.seed = seed + k;
        opt.n_boot = n_boot;
        opt.gamma_high = gamma_high;
        opt.parallelism.threads = threads;
        tables.push_back(experiments::run_table1_experiment(opt));
      }
      if (format == "text") {
        print_table1_text(tables);
      } else {
        json j{{"schema", "proxtext.table1/1"}, {"n_boot", n_boot}, {"gamma_high", gamma_high}, {"runs", json::array()}};
        for (const auto& t : tables) j["runs"].push_back(table1_json(t));
        emit(j, out);
      }
      return kExitProceed;
    }

    if (gotchas->parsed()) {
      json j{{"schema", "proxtext.gotchas/1"}, {"n", gotcha_n}, {"runs", json::array()}};
      for (std::size_t k = 0; k < gotcha_seeds; ++k) {
        json rows = json::array();
        for (const auto& r : experiments::run_gotcha_bench(gotcha_n, seed + k)) {
          rows.push_back({{"arm", r.arm}, {"estimate", r.estimate}, {"bias", r.bias}});
        }
        j["runs"].push_back({{"seed", seed + k}, {"rows", rows}});
      }
      emit(j, out);
      return kExitProceed;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
